#include "oamc/codec.hpp"

#include <algorithm>
#include <string>

#include "oamc/errors.hpp"

namespace oamc {

namespace {

void require_shape(const CodeParams& p, const CellMatrix& w, uint32_t nodes) {
  if (w.coords != p.l || w.nodes != nodes) {
    throw DimensionError("cell matrix shape does not match code params");
  }
}

}  // namespace

std::vector<Symbol> CellMatrix::column(uint32_t node) const {
  const size_t base = static_cast<size_t>(node - 1) * coords;
  return std::vector<Symbol>(cells.begin() + base,
                             cells.begin() + base + coords);
}

std::vector<Symbol> syndrome(const CodeParams& p, const Codeword& word) {
  require_shape(p, word, p.n);
  const Field& f = p.field;
  std::vector<Symbol> out(static_cast<size_t>(p.r) * p.l, 0);
  for (uint32_t t = 0; t < p.r; ++t) {
    for (uint64_t a = 0; a < p.l; ++a) {
      Symbol acc = 0;
      for (uint32_t i = 1; i <= p.n; ++i) {
        for (const RowEntry& e : row_support(p, t, i, a)) {
          acc = f.add(acc, f.mul(e.value, word.cell(i, e.col)));
        }
      }
      out[static_cast<size_t>(t) * p.l + a] = acc;
    }
  }
  return out;
}

Decoder::Decoder(const CodeParams& p, std::vector<uint32_t> erased)
    : params_(p), erased_(std::move(erased)) {
  std::sort(erased_.begin(), erased_.end());
  if (std::adjacent_find(erased_.begin(), erased_.end()) != erased_.end()) {
    throw DecodeError("duplicate erased node");
  }
  for (uint32_t node : erased_) {
    if (node < 1 || node > p.n) throw DecodeError("erased node out of range");
  }
  if (erased_.size() > p.r) {
    throw DecodeError("more than r = " + std::to_string(p.r) +
                      " erased nodes");
  }

  const Field& f = p.field;
  const size_t unknowns = erased_.size() * p.l;
  const size_t eqs = static_cast<size_t>(p.r) * p.l;
  if (unknowns == 0) return;

  // Coefficients of the unknown cells in every parity equation. Unknown
  // (ei, b) lives at column ei*l + b.
  Matrix m(eqs, unknowns);
  for (uint32_t t = 0; t < p.r; ++t) {
    for (uint64_t a = 0; a < p.l; ++a) {
      const size_t row = static_cast<size_t>(t) * p.l + a;
      for (size_t ei = 0; ei < erased_.size(); ++ei) {
        for (const RowEntry& e : row_support(p, t, erased_[ei], a)) {
          m.at(row, ei * p.l + e.col) =
              f.add(m.at(row, ei * p.l + e.col), e.value);
        }
      }
    }
  }

  // Select one pivot equation per unknown, then invert that square
  // subsystem. The MDS property guarantees full column rank.
  Matrix work = m;
  std::vector<size_t> pivot_rows;
  std::vector<bool> used(eqs, false);
  pivot_rows.reserve(unknowns);
  for (size_t c = 0; c < unknowns; ++c) {
    size_t pivot = eqs;
    for (size_t rr = 0; rr < eqs; ++rr) {
      if (!used[rr] && work.at(rr, c) != 0) {
        pivot = rr;
        break;
      }
    }
    if (pivot == eqs) {
      throw DecodeError("internal: erasure system lost column rank");
    }
    used[pivot] = true;
    pivot_rows.push_back(pivot);
    const Symbol scale = f.inv(work.at(pivot, c));
    for (size_t cc = c; cc < unknowns; ++cc) {
      work.at(pivot, cc) = f.mul(scale, work.at(pivot, cc));
    }
    for (size_t rr = 0; rr < eqs; ++rr) {
      if (rr == pivot) continue;
      const Symbol factor = work.at(rr, c);
      if (factor == 0) continue;
      for (size_t cc = c; cc < unknowns; ++cc) {
        work.at(rr, cc) =
            f.sub(work.at(rr, cc), f.mul(factor, work.at(pivot, cc)));
      }
    }
  }

  Matrix square(unknowns, unknowns);
  for (size_t lr = 0; lr < unknowns; ++lr) {
    for (size_t c = 0; c < unknowns; ++c) {
      square.at(lr, c) = m.at(pivot_rows[lr], c);
    }
  }
  auto inv = invert(f, square);
  if (!inv) throw DecodeError("internal: pivot subsystem not invertible");
  solver_ = std::move(*inv);

  // Known-cell contributions to the pivot equations.
  std::vector<bool> is_erased(p.n + 1, false);
  for (uint32_t node : erased_) is_erased[node] = true;
  for (size_t lr = 0; lr < unknowns; ++lr) {
    const uint32_t t = static_cast<uint32_t>(pivot_rows[lr] / p.l);
    const uint64_t a = pivot_rows[lr] % p.l;
    for (uint32_t i = 1; i <= p.n; ++i) {
      if (is_erased[i]) continue;
      for (const RowEntry& e : row_support(p, t, i, a)) {
        known_terms_.push_back(
            {static_cast<uint32_t>(lr), i, e.col, e.value});
      }
    }
  }
}

Codeword Decoder::decode(const Codeword& known) const {
  require_shape(params_, known, params_.n);
  Codeword out = known;
  const Field& f = params_.field;
  const size_t unknowns = erased_.size() * params_.l;
  if (unknowns > 0) {
    std::vector<Symbol> rhs(unknowns, 0);
    for (const KnownTerm& term : known_terms_) {
      rhs[term.row] =
          f.add(rhs[term.row], f.mul(term.coeff, known.cell(term.node,
                                                            term.coord)));
    }
    for (Symbol& v : rhs) v = f.neg(v);
    const std::vector<Symbol> x = apply(f, solver_, rhs);
    for (size_t ei = 0; ei < erased_.size(); ++ei) {
      for (uint64_t b = 0; b < params_.l; ++b) {
        out.cell(erased_[ei], b) = x[ei * params_.l + b];
      }
    }
  }
  for (Symbol v : syndrome(params_, out)) {
    if (v != 0) {
      throw DecodeError("known cells are inconsistent with the code");
    }
  }
  return out;
}

Encoder::Encoder(const CodeParams& p)
    : k_(p.k), core_(p, [&] {
        std::vector<uint32_t> parities;
        for (uint32_t i = p.k + 1; i <= p.n; ++i) parities.push_back(i);
        return parities;
      }()) {}

Codeword Encoder::encode(const CellMatrix& data) const {
  if (data.nodes != k_) {
    throw DimensionError("data block must have k node columns");
  }
  Codeword known(data.coords, k_ + static_cast<uint32_t>(core_.erased().size()));
  std::copy(data.cells.begin(), data.cells.end(), known.cells.begin());
  return core_.decode(known);
}

Codeword encode(const CodeParams& p, const CellMatrix& data) {
  return Encoder(p).encode(data);
}

Codeword decode(const CodeParams& p, const Codeword& known,
                const std::vector<uint32_t>& erased) {
  return Decoder(p, erased).decode(known);
}

}  // namespace oamc
