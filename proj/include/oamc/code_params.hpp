#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oamc/field.hpp"

namespace oamc {

// Parameters of one array-code instance together with the implicit
// parity-check rule that generates the l*l blocks A_{t,i}.
//
// Nodes are numbered 1..n. A coordinate a in [0, l) is read in base
// digit_base() as digits (a_axes, ..., a_1), digit 1 least significant.
// Node i = (v-1)*base + u + 1 sits in group v (the digit axis it repairs
// through) at slot u. Construction 2 behaves as construction 1 with base r
// and m+1 axes, restricted to the first n = r*m + r' nodes; the final
// group is partial but keeps the full set of r evaluation points.
struct CodeParams {
  int construction = 1;
  uint32_t s = 0;       // group size (construction 2 stores s = r)
  uint32_t r = 0;       // parity count
  uint32_t m = 0;       // group count (1) / base length multiplier (2)
  uint32_t rprime = 0;  // remainder, construction 2 only
  uint32_t n = 0;
  uint32_t k = 0;
  uint64_t l = 0;  // sub-packetization
  Field field;
  std::vector<Symbol> eval_points;  // distinct, one per (possibly virtual) node
  Symbol twist = 0;                 // diagonal scale, never 0 or 1

  static CodeParams construction1(uint32_t s, uint32_t r, uint32_t m,
                                  const FieldSpec& fs);
  static CodeParams construction2(uint32_t r, uint32_t m, uint32_t rprime,
                                  const FieldSpec& fs);

  uint32_t digit_base() const { return construction == 1 ? s : r; }
  uint32_t axes() const { return construction == 1 ? m : m + 1; }

  // 1-based group index and 0-based slot of a node.
  uint32_t group_of(uint32_t node) const;
  uint32_t slot_of(uint32_t node) const;

  uint32_t digit(uint64_t a, uint32_t axis) const;
  // The paper-style substitution a(v,u): digit `axis` replaced by `value`.
  uint64_t with_digit(uint64_t a, uint32_t axis, uint32_t value) const;

  // Evaluation point of slot w in group v; may address a virtual node of a
  // partial final group under construction 2.
  Symbol group_eval_point(uint32_t v, uint32_t w) const;

  // Coordinates {a : a_v = u}, ascending; exactly l / digit_base() of them.
  std::vector<uint64_t> fiber_coords(uint32_t v, uint32_t u) const;

  // Node ids of group v that actually exist (the final construction-2
  // group holds only rprime of them).
  std::vector<uint32_t> group_nodes(uint32_t v) const;

  // Wire format: construction u8, s u16, r u16, m u16, r' u16, field spec
  // bytes, little-endian. Evaluation points and twist are re-derived.
  std::vector<uint8_t> serialize() const;
  static CodeParams deserialize(const uint8_t* data, size_t size, size_t& off);
  std::string fingerprint_hex() const;
};

CodeParams make_params(int construction, uint32_t s, uint32_t r, uint32_t m,
                       uint32_t rprime, const FieldSpec& fs);

struct RowEntry {
  uint64_t col;
  Symbol value;

  bool operator==(const RowEntry&) const = default;
};

// Entry A_{t,node}(a, b) of the parity-check block, evaluated from the rule.
Symbol matrix_entry(const CodeParams& p, uint32_t t, uint32_t node, uint64_t a,
                    uint64_t b);

// The nonzero entries of row a of A_{t,node}, ascending by column. The row
// holds digit_base() entries when a's group digit equals the node's slot,
// one entry otherwise.
std::vector<RowEntry> row_support(const CodeParams& p, uint32_t t,
                                  uint32_t node, uint64_t a);

}  // namespace oamc
