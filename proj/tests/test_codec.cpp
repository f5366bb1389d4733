#include <doctest.h>

#include <random>
#include <set>

#include "oamc/codec.hpp"
#include "support/test_util.hpp"

using namespace oamc;

namespace {

bool is_zero(const std::vector<Symbol>& v) {
  for (Symbol x : v) {
    if (x != 0) return false;
  }
  return true;
}

// all subsets of {1..n} with size in [1, r]
std::vector<std::vector<uint32_t>> erasure_patterns(uint32_t n, uint32_t r) {
  std::vector<std::vector<uint32_t>> out;
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (static_cast<uint32_t>(__builtin_popcount(mask)) > r) continue;
    std::vector<uint32_t> subset;
    for (uint32_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) subset.push_back(i + 1);
    }
    out.push_back(std::move(subset));
  }
  return out;
}

}  // namespace

TEST_CASE("zero data encodes to the zero codeword") {
  const CodeParams p = testutil::gf7_332();
  const Codeword word = encode(p, CellMatrix(p.l, p.k));
  CHECK(is_zero(word.cells));
  CHECK(is_zero(syndrome(p, word)));
}

TEST_CASE("encoded words satisfy every parity check") {
  for (const CodeParams& p : {testutil::gf7_332(), testutil::gf7_c2()}) {
    const Encoder enc(p);
    for (uint64_t seed = 0; seed < 200; ++seed) {
      const Codeword word = testutil::seeded_codeword(p, enc, seed);
      CHECK(is_zero(syndrome(p, word)));
    }
  }
}

TEST_CASE("a single flipped cell breaks the syndrome") {
  const CodeParams p = testutil::gf7_233();
  const Encoder enc(p);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    Codeword word = testutil::seeded_codeword(p, enc, i);
    const uint32_t node = 1 + static_cast<uint32_t>(rng() % p.n);
    const uint64_t a = rng() % p.l;
    word.cell(node, a) = p.field.add(word.cell(node, a), 1);
    CHECK(!is_zero(syndrome(p, word)));
  }
}

TEST_CASE("encode is linear") {
  const CodeParams p = testutil::gf7_332();
  const Encoder enc(p);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    const CellMatrix x = testutil::random_data(p, rng);
    const CellMatrix y = testutil::random_data(p, rng);
    CellMatrix sum(p.l, p.k);
    for (size_t c = 0; c < sum.cells.size(); ++c) {
      sum.cells[c] = p.field.add(x.cells[c], y.cells[c]);
    }
    const Codeword wx = enc.encode(x);
    const Codeword wy = enc.encode(y);
    const Codeword wsum = enc.encode(sum);
    for (size_t c = 0; c < wsum.cells.size(); ++c) {
      CHECK(wsum.cells[c] == p.field.add(wx.cells[c], wy.cells[c]));
    }
  }
}

TEST_CASE("parities match an independently solved dense system") {
  const CodeParams p = testutil::gf7_332();
  const Encoder enc(p);
  const size_t unknowns = static_cast<size_t>(p.r) * p.l;

  auto oracle_parities = [&](const CellMatrix& data) {
    // rows (t,a), unknown (parity node offset, coordinate b)
    std::vector<std::vector<Symbol>> m(unknowns,
                                       std::vector<Symbol>(unknowns, 0));
    std::vector<Symbol> rhs(unknowns, 0);
    for (uint32_t t = 0; t < p.r; ++t) {
      for (uint64_t a = 0; a < p.l; ++a) {
        const size_t row = t * p.l + a;
        for (uint32_t pi = 0; pi < p.r; ++pi) {
          for (uint64_t b = 0; b < p.l; ++b) {
            m[row][pi * p.l + b] = matrix_entry(p, t, p.k + 1 + pi, a, b);
          }
        }
        Symbol acc = 0;
        for (uint32_t i = 1; i <= p.k; ++i) {
          for (uint64_t b = 0; b < p.l; ++b) {
            acc = p.field.add(
                acc, p.field.mul(matrix_entry(p, t, i, a, b), data.cell(i, b)));
          }
        }
        rhs[row] = p.field.neg(acc);
      }
    }
    return testutil::oracle_solve(p.field, m, rhs);
  };

  std::mt19937_64 rng(21);
  std::vector<CellMatrix> inputs;
  for (int unit = 0; unit < 3; ++unit) {
    CellMatrix data(p.l, p.k);
    data.cell(unit + 1, static_cast<uint64_t>(2 * unit)) = 1;
    inputs.push_back(data);
  }
  inputs.push_back(testutil::random_data(p, rng));
  inputs.push_back(testutil::random_data(p, rng));

  for (const CellMatrix& data : inputs) {
    const Codeword word = enc.encode(data);
    const std::vector<Symbol> expected = oracle_parities(data);
    for (uint32_t pi = 0; pi < p.r; ++pi) {
      for (uint64_t b = 0; b < p.l; ++b) {
        CHECK(word.cell(p.k + 1 + pi, b) == expected[pi * p.l + b]);
      }
    }
  }
}

TEST_CASE("decode with zero erasures is the identity") {
  const CodeParams p = testutil::gf7_332();
  const Encoder enc(p);
  const Codeword word = testutil::seeded_codeword(p, enc, 77);
  CHECK(decode(p, word, {}) == word);
}

TEST_CASE("decode restores the worked-instance erasure {1,2,5}") {
  const CodeParams p = testutil::gf7_332();
  const Encoder enc(p);
  const Decoder dec(p, {1, 2, 5});
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const Codeword word = testutil::seeded_codeword(p, enc, seed);
    Codeword damaged = word;
    for (uint32_t node : {1, 2, 5}) {
      for (uint64_t a = 0; a < p.l; ++a) damaged.cell(node, a) = 0;
    }
    CHECK(dec.decode(damaged) == word);
  }
}

TEST_CASE("decode round-trips every erasure pattern at desk scale") {
  for (const CodeParams& p :
       {testutil::gf5_222(), testutil::gf7_233(), testutil::gf7_c2()}) {
    const Encoder enc(p);
    for (const auto& pattern : erasure_patterns(p.n, p.r)) {
      const Decoder dec(p, pattern);
      for (uint64_t seed = 0; seed < 10; ++seed) {
        const Codeword word = testutil::seeded_codeword(p, enc, seed);
        Codeword damaged = word;
        for (uint32_t node : pattern) {
          for (uint64_t a = 0; a < p.l; ++a) {
            damaged.cell(node, a) = static_cast<Symbol>(seed % 2);
          }
        }
        const Codeword restored = dec.decode(damaged);
        CHECK(restored == word);
        CHECK(is_zero(syndrome(p, restored)));
      }
    }
  }
}

TEST_CASE("decode rejects bad inputs") {
  const CodeParams p = testutil::gf7_332();
  const Encoder enc(p);
  CHECK_THROWS_AS(Decoder(p, {1, 2, 3, 4}), DecodeError);
  CHECK_THROWS_AS(Decoder(p, {0}), DecodeError);
  CHECK_THROWS_AS(Decoder(p, {7}), DecodeError);
  CHECK_THROWS_AS(Decoder(p, {2, 2}), DecodeError);

  // an inconsistent known cell is caught when fewer than r nodes are erased
  Codeword word = testutil::seeded_codeword(p, enc, 1);
  word.cell(6, 0) = p.field.add(word.cell(6, 0), 3);
  CHECK_THROWS_AS(decode(p, word, {1, 2}), DecodeError);
}

TEST_CASE("shape mismatches are rejected") {
  const CodeParams p = testutil::gf7_332();
  CHECK_THROWS_AS(syndrome(p, Codeword(p.l, p.n - 1)), DimensionError);
  CHECK_THROWS_AS(encode(p, CellMatrix(p.l, p.k + 1)), DimensionError);
  CHECK_THROWS_AS(encode(p, CellMatrix(p.l - 1, p.k)), DimensionError);
}
