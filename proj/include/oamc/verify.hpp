#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oamc/code_params.hpp"
#include "oamc/linalg.hpp"

namespace oamc {

// The r*l x r*l block matrix [A_{t, subset_j}] for an increasing r-subset
// of nodes, materialized from the rule.
Matrix block_submatrix(const CodeParams& p, const std::vector<uint32_t>& subset);

// Row permutation j -> (j - j mod l)/l + r*(j mod l); groups the block
// matrix into l strips of r rows, one per coordinate.
Matrix permute_rows(const CodeParams& p, const Matrix& m);

// The column structure of strip a of the permuted system: which evaluation
// points appear (as plain or twist-scaled power columns), at which column
// indices, and how those indices partition by point.
struct StripAnalysis {
  uint64_t strip = 0;
  std::set<uint32_t> points;                          // U^(a), 1-based ids
  std::set<uint64_t> nonzero_cols;                    // J^(a)
  std::map<uint32_t, std::set<uint64_t>> cols_by_point;  // J^(a)(i)
};

StripAnalysis strip_analysis(const CodeParams& p,
                             const std::vector<uint32_t>& subset, uint64_t a);

// Strips whose point set is exactly the subset: {a : |U^(a)| = r}.
std::set<uint64_t> full_rank_strips(const CodeParams& p,
                                    const std::vector<uint32_t>& subset);

struct SubsetVerdict {
  std::vector<uint32_t> subset;
  bool invertible = false;
};

struct MdsCertificate {
  std::string fingerprint;
  std::vector<SubsetVerdict> verdicts;
  bool pass = false;
};

inline constexpr uint64_t default_mds_budget = 1'000'000'000;

// Rank-tests every r-subset's block submatrix. Throws BudgetError when the
// work estimate C(n,r) * (r*l)^3 exceeds the budget; a failed subset is a
// verdict, not an error.
MdsCertificate check_mds(const CodeParams& p,
                         uint64_t budget = default_mds_budget);

// Line-oriented certificate: a header with the params fingerprint, then
// "subset=<i1,...,ir> invertible=<true|false>" per subset.
std::string format_certificate(const MdsCertificate& cert);

// For s = r instances: l = r^ceil(n/r) and l >= r^((k-1)/r).
bool check_subpacketization(const CodeParams& p);

}  // namespace oamc
