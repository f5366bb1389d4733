#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "oamc/code_params.hpp"
#include "oamc/codec.hpp"
#include "oamc/linalg.hpp"

namespace oamc {

enum class RepairMode : uint8_t { full = 0, group = 1 };

// A single-node repair job: which survivors to contact and which
// coordinates to read from each of them. Every helper is read on the same
// fiber {a : a_v = u}, exactly l / digit_base() coordinates.
struct RepairPlan {
  uint32_t failed = 0;
  RepairMode mode = RepairMode::full;
  std::vector<uint32_t> helpers;  // ascending
  std::vector<uint64_t> coords;   // ascending

  // Wire format: failed u16, mode u8, helpers u16 each (count implied by
  // the buffer length); the coordinate list is re-derived from the params.
  std::vector<uint8_t> serialize() const;
  static RepairPlan deserialize(const CodeParams& p, const uint8_t* data,
                                size_t size);
};

// Per-helper reads, coordinate -> symbol.
using HelperReads = std::map<uint32_t, std::map<uint64_t, Symbol>>;

// All n-1 survivors help; the failed node's column is rebuilt from the
// fiber reads alone.
RepairPlan plan_full_repair(const CodeParams& p, uint32_t failed);

// Group mode: the s-1 group mates plus a chosen set of k helpers outside
// the failed node's group, d = s+k-1 in total. Construction 1 only.
RepairPlan plan_group_repair(const CodeParams& p, uint32_t failed,
                             const std::vector<uint32_t>& outside_helpers);

std::vector<Symbol> repair_full(const CodeParams& p, const RepairPlan& plan,
                                const HelperReads& reads);
std::vector<Symbol> repair_group(const CodeParams& p, const RepairPlan& plan,
                                 const HelperReads& reads);

// Projection that eliminates one group's unknowns from the parity checks:
// the coefficients of g_j(x) = x^j * prod_w (x - lambda_{group slot w}) for
// j < r-s, the (r-s) x r matrix of those coefficient rows, and the
// projected power columns for every node outside the group.
struct Annihilator {
  uint32_t group = 0;
  std::vector<Symbol> root_poly;  // degree-s coefficients, constant first
  Matrix projection;              // (r-s) x r
  std::map<uint32_t, std::vector<Symbol>> projected_columns;
};

Annihilator make_annihilator(const CodeParams& p, uint32_t group);

// Records which cells a repair run actually touched.
class ReadTrace {
 public:
  void record(uint32_t node, uint64_t coord) { reads_[node].insert(coord); }
  const std::map<uint32_t, std::set<uint64_t>>& by_node() const {
    return reads_;
  }
  uint64_t total() const;

 private:
  std::map<uint32_t, std::set<uint64_t>> reads_;
};

using SymbolSource = std::function<Symbol(uint32_t node, uint64_t coord)>;

// Fetches exactly the planned cells from `source`, optionally recording
// them into `trace`.
HelperReads collect_reads(const RepairPlan& plan, const SymbolSource& source,
                          ReadTrace* trace = nullptr);

// Convenience source backed by an in-memory codeword.
SymbolSource codeword_source(const Codeword& word);

struct AccessReport {
  std::map<uint32_t, uint64_t> per_helper;  // symbols accessed per helper
  uint64_t accessed = 0;                    // omega
  uint64_t downloaded = 0;                  // beta; equals omega here
  uint64_t bound_num = 0;                   // exact rational lower bound
  uint64_t bound_den = 1;
  bool optimal = false;
};

// Counts the traced accesses against the plan and the cut-set bound:
// (n-1)l/(n-k) in full mode, dl/s in group mode. Throws RepairError if the
// trace touched any cell outside the plan.
AccessReport audit_access(const CodeParams& p, const RepairPlan& plan,
                          const ReadTrace& trace);

}  // namespace oamc
