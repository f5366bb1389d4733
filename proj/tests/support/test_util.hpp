#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "oamc/code_params.hpp"
#include "oamc/codec.hpp"

namespace testutil {

using oamc::CellMatrix;
using oamc::CodeParams;
using oamc::Codeword;
using oamc::Field;
using oamc::FieldSpec;
using oamc::Symbol;

// The worked instance: construction 1, s=r=3, m=2 over GF(7); n=6, l=9.
inline CodeParams gf7_332() {
  return CodeParams::construction1(3, 3, 2, FieldSpec::make_prime(7));
}

inline CodeParams gf5_222() {
  return CodeParams::construction1(2, 2, 2, FieldSpec::make_prime(5));
}

// Group-repair instance: s=2 < r=3, m=3; n=6, k=3, l=8.
inline CodeParams gf7_233() {
  return CodeParams::construction1(2, 3, 3, FieldSpec::make_prime(7));
}

// Construction 2: r=3, m=1, r'=2; n=5, k=2, l=9.
inline CodeParams gf7_c2() {
  return CodeParams::construction2(3, 1, 2, FieldSpec::make_prime(7));
}

inline CellMatrix random_data(const CodeParams& p, std::mt19937_64& rng) {
  CellMatrix data(p.l, p.k);
  for (Symbol& cell : data.cells) {
    cell = static_cast<Symbol>(rng() % p.field.order());
  }
  return data;
}

inline Codeword seeded_codeword(const CodeParams& p, const oamc::Encoder& enc,
                                uint64_t seed) {
  std::mt19937_64 rng(seed);
  return enc.encode(random_data(p, rng));
}

// Schoolbook GF(2^w) multiply: shift-and-add with a reduction after every
// doubling step. Test-side oracle, independent of the library's carry-less
// product and log tables. `poly` includes the x^w term.
inline uint32_t schoolbook_gf2_mul(uint32_t a, uint32_t b, uint32_t poly,
                                   uint32_t w) {
  uint32_t r = 0;
  const uint32_t top = 1u << w;
  while (b) {
    if (b & 1) r ^= a;
    a <<= 1;
    if (a & top) a ^= poly;
    b >>= 1;
  }
  return r;
}

// Test-side dense solver oracle (Gauss-Jordan on row vectors), independent
// of the library's Matrix machinery. Requires a unique solution.
inline std::vector<Symbol> oracle_solve(const Field& f,
                                        std::vector<std::vector<Symbol>> m,
                                        std::vector<Symbol> rhs) {
  const size_t rows = m.size();
  const size_t cols = m.empty() ? 0 : m[0].size();
  std::vector<size_t> where(cols, SIZE_MAX);
  size_t next = 0;
  for (size_t c = 0; c < cols; ++c) {
    size_t pivot = SIZE_MAX;
    for (size_t r = next; r < rows; ++r) {
      if (m[r][c] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot == SIZE_MAX) throw std::runtime_error("oracle: singular");
    std::swap(m[pivot], m[next]);
    std::swap(rhs[pivot], rhs[next]);
    const Symbol inv = f.inv(m[next][c]);
    for (size_t cc = 0; cc < cols; ++cc) m[next][cc] = f.mul(inv, m[next][cc]);
    rhs[next] = f.mul(inv, rhs[next]);
    for (size_t r = 0; r < rows; ++r) {
      if (r == next || m[r][c] == 0) continue;
      const Symbol factor = m[r][c];
      for (size_t cc = 0; cc < cols; ++cc) {
        m[r][cc] = f.sub(m[r][cc], f.mul(factor, m[next][cc]));
      }
      rhs[r] = f.sub(rhs[r], f.mul(factor, rhs[next]));
    }
    where[c] = next;
    ++next;
  }
  for (size_t r = next; r < rows; ++r) {
    if (rhs[r] != 0) throw std::runtime_error("oracle: inconsistent");
  }
  std::vector<Symbol> x(cols);
  for (size_t c = 0; c < cols; ++c) x[c] = rhs[where[c]];
  return x;
}

}  // namespace testutil
