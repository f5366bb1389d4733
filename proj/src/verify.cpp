#include "oamc/verify.hpp"

#include <algorithm>

#include "oamc/errors.hpp"

namespace oamc {

namespace {

void require_subset(const CodeParams& p, const std::vector<uint32_t>& subset) {
  if (subset.size() != p.r) {
    throw DimensionError("subset must contain exactly r nodes");
  }
  for (size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] < 1 || subset[i] > p.n) {
      throw DimensionError("subset node out of range");
    }
    if (i > 0 && subset[i - 1] >= subset[i]) {
      throw DimensionError("subset must be strictly increasing");
    }
  }
}

// next lexicographic r-subset of 1..n; false when exhausted
bool next_subset(std::vector<uint32_t>& subset, uint32_t n) {
  const size_t r = subset.size();
  for (size_t i = r; i-- > 0;) {
    if (subset[i] < n - (r - 1 - i)) {
      ++subset[i];
      for (size_t j = i + 1; j < r; ++j) subset[j] = subset[j - 1] + 1;
      return true;
    }
  }
  return false;
}

uint64_t saturating_mul(uint64_t a, uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

uint64_t binomial_saturating(uint32_t n, uint32_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  uint64_t result = 1;
  for (uint32_t i = 1; i <= r; ++i) {
    result = saturating_mul(result, n - r + i);
    if (result != UINT64_MAX) result /= i;
  }
  return result;
}

}  // namespace

Matrix block_submatrix(const CodeParams& p,
                       const std::vector<uint32_t>& subset) {
  require_subset(p, subset);
  const size_t dim = static_cast<size_t>(p.r) * p.l;
  Matrix b(dim, dim);
  for (uint32_t t = 0; t < p.r; ++t) {
    for (size_t j = 0; j < subset.size(); ++j) {
      for (uint64_t a = 0; a < p.l; ++a) {
        for (const RowEntry& e : row_support(p, t, subset[j], a)) {
          b.at(static_cast<size_t>(t) * p.l + a, j * p.l + e.col) = e.value;
        }
      }
    }
  }
  return b;
}

Matrix permute_rows(const CodeParams& p, const Matrix& m) {
  const size_t rows = static_cast<size_t>(p.r) * p.l;
  if (m.rows != rows) {
    throw DimensionError("matrix must have r*l rows");
  }
  Matrix out(m.rows, m.cols);
  for (size_t j = 0; j < rows; ++j) {
    const size_t dest = (j - j % p.l) / p.l + p.r * (j % p.l);
    for (size_t c = 0; c < m.cols; ++c) out.at(dest, c) = m.at(j, c);
  }
  return out;
}

StripAnalysis strip_analysis(const CodeParams& p,
                             const std::vector<uint32_t>& subset, uint64_t a) {
  require_subset(p, subset);
  if (a >= p.l) throw DimensionError("strip index out of range");
  StripAnalysis out;
  out.strip = a;
  const uint32_t base = p.digit_base();
  for (size_t j = 0; j < subset.size(); ++j) {
    const uint32_t node = subset[j];
    const uint32_t v = p.group_of(node);
    const uint32_t u = p.slot_of(node);
    const uint32_t d = p.digit(a, v);
    if (d == u) {
      // Row a of this block spreads over the whole group's power columns,
      // including virtual evaluation points of a partial final group.
      for (uint32_t w = 0; w < base; ++w) {
        const uint32_t point = (v - 1) * base + w + 1;
        const uint64_t col = j * p.l + p.with_digit(a, v, w);
        out.points.insert(point);
        out.nonzero_cols.insert(col);
        out.cols_by_point[point].insert(col);
      }
    } else {
      const uint64_t col = j * p.l + a;
      out.points.insert(node);
      out.nonzero_cols.insert(col);
      out.cols_by_point[node].insert(col);
    }
  }
  return out;
}

std::set<uint64_t> full_rank_strips(const CodeParams& p,
                                    const std::vector<uint32_t>& subset) {
  std::set<uint64_t> strips;
  for (uint64_t a = 0; a < p.l; ++a) {
    if (strip_analysis(p, subset, a).points.size() == p.r) strips.insert(a);
  }
  return strips;
}

MdsCertificate check_mds(const CodeParams& p, uint64_t budget) {
  const uint64_t dim = static_cast<uint64_t>(p.r) * p.l;
  const uint64_t per_subset = saturating_mul(saturating_mul(dim, dim), dim);
  const uint64_t work =
      saturating_mul(binomial_saturating(p.n, p.r), per_subset);
  if (work > budget) {
    throw BudgetError("estimated " + std::to_string(work) +
                      " element operations exceed the budget of " +
                      std::to_string(budget));
  }

  MdsCertificate cert;
  cert.fingerprint = p.fingerprint_hex();
  cert.pass = true;
  std::vector<uint32_t> subset(p.r);
  for (uint32_t i = 0; i < p.r; ++i) subset[i] = i + 1;
  do {
    const bool invertible =
        rank(p.field, block_submatrix(p, subset)) == dim;
    cert.verdicts.push_back({subset, invertible});
    cert.pass = cert.pass && invertible;
  } while (next_subset(subset, p.n));
  return cert;
}

std::string format_certificate(const MdsCertificate& cert) {
  std::string out = "params=" + cert.fingerprint + "\n";
  for (const SubsetVerdict& v : cert.verdicts) {
    out += "subset=";
    for (size_t i = 0; i < v.subset.size(); ++i) {
      if (i > 0) out += ",";
      out += std::to_string(v.subset[i]);
    }
    out += " invertible=";
    out += v.invertible ? "true" : "false";
    out += "\n";
  }
  return out;
}

bool check_subpacketization(const CodeParams& p) {
  if (p.digit_base() != p.r) {
    throw ParamError("sub-packetization check applies to the s = r regime");
  }
  const uint32_t ceil_n_r = (p.n + p.r - 1) / p.r;
  uint64_t expected = 1;
  for (uint32_t i = 0; i < ceil_n_r; ++i) {
    expected = saturating_mul(expected, p.r);
  }
  if (p.l != expected) return false;
  // l >= r^((k-1)/r), compared exactly as l^r >= r^(k-1).
  uint64_t lhs = 1;
  for (uint32_t i = 0; i < p.r && lhs != UINT64_MAX; ++i) {
    lhs = saturating_mul(lhs, p.l);
  }
  uint64_t rhs = 1;
  for (uint32_t i = 0; i + 1 < p.k && rhs != UINT64_MAX; ++i) {
    rhs = saturating_mul(rhs, p.r);
  }
  return lhs >= rhs;
}

}  // namespace oamc
