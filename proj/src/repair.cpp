#include "oamc/repair.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <string>

#include "oamc/errors.hpp"

namespace oamc {

namespace {

void require_node(const CodeParams& p, uint32_t node) {
  if (node < 1 || node > p.n) {
    throw RepairError("node index " + std::to_string(node) + " out of range");
  }
}

void require_reads_cover_plan(const RepairPlan& plan,
                              const HelperReads& reads) {
  for (uint32_t helper : plan.helpers) {
    auto it = reads.find(helper);
    if (it == reads.end()) {
      throw RepairError("missing reads for helper " + std::to_string(helper));
    }
    if (it->second.size() != plan.coords.size()) {
      throw RepairError("reads for helper " + std::to_string(helper) +
                        " do not cover the plan exactly");
    }
    for (uint64_t a : plan.coords) {
      if (!it->second.count(a)) {
        throw RepairError("helper " + std::to_string(helper) +
                          " is missing coordinate " + std::to_string(a));
      }
    }
  }
  if (reads.size() != plan.helpers.size()) {
    throw RepairError("reads contain nodes outside the helper set");
  }
}

// Rebuilds the failed column from restricted symbols of all survivors.
// For each fiber coordinate a, the parity rows give
//   sigma_t = sum_w lambda_{group slot w}^t * c_{failed, a(v,w)},
// where sigma_t collects every survivor contribution; the group Vandermonde
// system then yields the s cells a(v,0..s-1) of the failed column.
std::vector<Symbol> rebuild_from_restricted(const CodeParams& p,
                                            uint32_t failed,
                                            const std::vector<uint64_t>& coords,
                                            const SymbolSource& get) {
  const Field& f = p.field;
  const uint32_t v = p.group_of(failed);
  const uint32_t base = p.digit_base();

  Matrix vand(base, base);
  for (uint32_t t = 0; t < base; ++t) {
    for (uint32_t w = 0; w < base; ++w) {
      vand.at(t, w) = f.pow(p.group_eval_point(v, w), t);
    }
  }
  auto vinv = invert(f, vand);
  if (!vinv) {
    throw RepairError("internal: group Vandermonde system singular");
  }

  std::vector<Symbol> column(p.l, 0);
  std::vector<Symbol> sigma(p.r, 0);
  std::vector<Symbol> rhs(base, 0);
  for (uint64_t a : coords) {
    for (uint32_t t = 0; t < p.r; ++t) {
      Symbol acc = 0;
      for (uint32_t i = 1; i <= p.n; ++i) {
        if (i == failed) continue;
        for (const RowEntry& e : row_support(p, t, i, a)) {
          acc = f.add(acc, f.mul(e.value, get(i, e.col)));
        }
      }
      sigma[t] = f.neg(acc);
    }
    std::copy(sigma.begin(), sigma.begin() + base, rhs.begin());
    const std::vector<Symbol> cells = apply(f, *vinv, rhs);
#ifndef NDEBUG
    // The parity rows beyond the square system must agree with the solve.
    for (uint32_t t = base; t < p.r; ++t) {
      Symbol check = 0;
      for (uint32_t w = 0; w < base; ++w) {
        check = f.add(check,
                      f.mul(f.pow(p.group_eval_point(v, w), t), cells[w]));
      }
      assert(check == sigma[t]);
    }
#endif
    for (uint32_t w = 0; w < base; ++w) {
      column[p.with_digit(a, v, w)] = cells[w];
    }
  }
  return column;
}

SymbolSource reads_source(const HelperReads& reads) {
  return [&reads](uint32_t node, uint64_t coord) {
    return reads.at(node).at(coord);
  };
}

}  // namespace

std::vector<uint8_t> RepairPlan::serialize() const {
  std::vector<uint8_t> out;
  out.push_back(static_cast<uint8_t>(failed));
  out.push_back(static_cast<uint8_t>(failed >> 8));
  out.push_back(static_cast<uint8_t>(mode));
  for (uint32_t h : helpers) {
    out.push_back(static_cast<uint8_t>(h));
    out.push_back(static_cast<uint8_t>(h >> 8));
  }
  return out;
}

RepairPlan RepairPlan::deserialize(const CodeParams& p, const uint8_t* data,
                                   size_t size) {
  if (size < 3 || (size - 3) % 2 != 0) {
    throw RepairError("malformed repair plan bytes");
  }
  const uint32_t failed = data[0] | (uint32_t{data[1]} << 8);
  const uint8_t mode = data[2];
  std::vector<uint32_t> helpers;
  for (size_t off = 3; off < size; off += 2) {
    helpers.push_back(data[off] | (uint32_t{data[off + 1]} << 8));
  }
  if (mode == static_cast<uint8_t>(RepairMode::full)) {
    RepairPlan plan = plan_full_repair(p, failed);
    if (plan.helpers != helpers) {
      throw RepairError("helper list does not match a full-repair plan");
    }
    return plan;
  }
  if (mode == static_cast<uint8_t>(RepairMode::group)) {
    const uint32_t v = p.group_of(failed);
    std::vector<uint32_t> outside;
    for (uint32_t h : helpers) {
      require_node(p, h);
      if (p.group_of(h) != v) outside.push_back(h);
    }
    RepairPlan plan = plan_group_repair(p, failed, outside);
    if (plan.helpers != helpers) {
      throw RepairError("helper list does not match a group-repair plan");
    }
    return plan;
  }
  throw RepairError("unknown repair mode byte");
}

RepairPlan plan_full_repair(const CodeParams& p, uint32_t failed) {
  require_node(p, failed);
  RepairPlan plan;
  plan.failed = failed;
  plan.mode = RepairMode::full;
  for (uint32_t i = 1; i <= p.n; ++i) {
    if (i != failed) plan.helpers.push_back(i);
  }
  plan.coords = p.fiber_coords(p.group_of(failed), p.slot_of(failed));
  return plan;
}

RepairPlan plan_group_repair(const CodeParams& p, uint32_t failed,
                             const std::vector<uint32_t>& outside_helpers) {
  require_node(p, failed);
  if (p.construction != 1) {
    throw RepairError("group repair is defined for construction 1");
  }
  const uint32_t v = p.group_of(failed);
  if (outside_helpers.size() != p.k) {
    throw RepairError("group repair needs exactly k = " + std::to_string(p.k) +
                      " helpers outside the group");
  }
  std::set<uint32_t> outside;
  for (uint32_t h : outside_helpers) {
    require_node(p, h);
    if (p.group_of(h) == v) {
      throw RepairError("node " + std::to_string(h) +
                        " is in the failed node's group");
    }
    if (!outside.insert(h).second) {
      throw RepairError("duplicate helper " + std::to_string(h));
    }
  }
  RepairPlan plan;
  plan.failed = failed;
  plan.mode = RepairMode::group;
  for (uint32_t mate : p.group_nodes(v)) {
    if (mate != failed) plan.helpers.push_back(mate);
  }
  plan.helpers.insert(plan.helpers.end(), outside.begin(), outside.end());
  std::sort(plan.helpers.begin(), plan.helpers.end());
  plan.coords = p.fiber_coords(v, p.slot_of(failed));
  return plan;
}

std::vector<Symbol> repair_full(const CodeParams& p, const RepairPlan& plan,
                                const HelperReads& reads) {
  if (plan.mode != RepairMode::full) {
    throw RepairError("plan is not a full-repair plan");
  }
  require_reads_cover_plan(plan, reads);
  return rebuild_from_restricted(p, plan.failed, plan.coords,
                                 reads_source(reads));
}

Annihilator make_annihilator(const CodeParams& p, uint32_t group) {
  if (p.s == p.r) {
    throw RepairError("group mode equals full mode for s = r");
  }
  if (p.construction != 1 || group < 1 || group > p.m) {
    throw RepairError("annihilator group index out of range");
  }
  const Field& f = p.field;

  // Monic product over the group's evaluation points, constant term first.
  std::vector<Symbol> poly{1};
  for (uint32_t w = 0; w < p.s; ++w) {
    const Symbol root = p.group_eval_point(group, w);
    std::vector<Symbol> next(poly.size() + 1, 0);
    for (size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] = f.add(next[i + 1], poly[i]);
      next[i] = f.sub(next[i], f.mul(root, poly[i]));
    }
    poly = std::move(next);
  }

  Annihilator ann;
  ann.group = group;
  ann.root_poly = poly;
  ann.projection = Matrix(p.r - p.s, p.r);
  for (uint32_t j = 0; j < p.r - p.s; ++j) {
    for (uint32_t t = 0; t <= p.s; ++t) {
      ann.projection.at(j, j + t) = poly[t];
    }
  }
  for (uint32_t i = 1; i <= p.n; ++i) {
    if (p.group_of(i) == group) continue;
    const Symbol x = p.eval_points[i - 1];
    Symbol value = 0;  // Horner, highest coefficient first
    for (size_t c = poly.size(); c-- > 0;) {
      value = f.add(f.mul(value, x), poly[c]);
    }
    std::vector<Symbol> column(p.r - p.s);
    for (uint32_t j = 0; j < p.r - p.s; ++j) {
      column[j] = f.mul(value, f.pow(x, j));
    }
    ann.projected_columns.emplace(i, std::move(column));
  }
  return ann;
}

std::vector<Symbol> repair_group(const CodeParams& p, const RepairPlan& plan,
                                 const HelperReads& reads) {
  if (plan.mode != RepairMode::group) {
    throw RepairError("plan is not a group-repair plan");
  }
  require_reads_cover_plan(plan, reads);
  const Field& f = p.field;
  const uint32_t v = p.group_of(plan.failed);
  const uint32_t base = p.digit_base();

  std::set<uint32_t> helper_set(plan.helpers.begin(), plan.helpers.end());
  // Nodes outside group v whose restricted symbols stage 1 must expand.
  std::vector<uint32_t> expansion;
  for (uint32_t i = 1; i <= p.n; ++i) {
    if (p.group_of(i) != v && !helper_set.count(i)) expansion.push_back(i);
  }

  HelperReads expanded = reads;
  if (!expansion.empty()) {
    const Annihilator ann = make_annihilator(p, v);
    const uint32_t proj_rows = p.r - p.s;
    const size_t fiber = plan.coords.size();
    std::map<uint64_t, size_t> coord_pos;
    for (size_t i = 0; i < fiber; ++i) coord_pos.emplace(plan.coords[i], i);
    std::map<uint32_t, size_t> node_pos;
    for (size_t i = 0; i < expansion.size(); ++i) {
      node_pos.emplace(expansion[i], i);
    }

    const size_t dim = expansion.size() * fiber;
    Matrix system(dim, dim);
    std::vector<Symbol> rhs(dim, 0);
    for (size_t fa = 0; fa < fiber; ++fa) {
      const uint64_t a = plan.coords[fa];
      // One projected parity block per fiber coordinate. Each survivor
      // outside group v contributes either its diagonal cell at a or, when
      // its group digit matches its slot, the rewrites across its own axis.
      for (uint32_t i = 1; i <= p.n; ++i) {
        const uint32_t q = p.group_of(i);
        if (q == v) continue;
        const uint32_t w = p.slot_of(i);
        const uint32_t d = p.digit(a, q);

        auto add_term = [&](uint64_t cell_coord, Symbol scale,
                            const std::vector<Symbol>& column) {
          const bool known = helper_set.count(i) != 0;
          for (uint32_t j = 0; j < proj_rows; ++j) {
            const Symbol coeff = f.mul(scale, column[j]);
            const size_t row = fa * proj_rows + j;
            if (known) {
              rhs[row] = f.sub(rhs[row],
                               f.mul(coeff, reads.at(i).at(cell_coord)));
            } else {
              const size_t col =
                  node_pos.at(i) * fiber + coord_pos.at(cell_coord);
              system.at(row, col) = f.add(system.at(row, col), coeff);
            }
          }
        };

        if (d == w) {
          for (uint32_t w2 = 0; w2 < base; ++w2) {
            const uint32_t col_node = (q - 1) * base + w2 + 1;
            add_term(p.with_digit(a, q, w2), 1,
                     ann.projected_columns.at(col_node));
          }
        } else {
          add_term(a, d > w ? p.twist : Symbol{1},
                   ann.projected_columns.at(i));
        }
      }
    }

    auto solution = solve(f, std::move(system), std::move(rhs));
    if (!solution) {
      throw RepairError("internal: group expansion system singular");
    }
    for (size_t ni = 0; ni < expansion.size(); ++ni) {
      auto& cells = expanded[expansion[ni]];
      for (size_t fa = 0; fa < fiber; ++fa) {
        cells[plan.coords[fa]] = (*solution)[ni * fiber + fa];
      }
    }
  }

  return rebuild_from_restricted(p, plan.failed, plan.coords,
                                 reads_source(expanded));
}

uint64_t ReadTrace::total() const {
  uint64_t sum = 0;
  for (const auto& [node, coords] : reads_) sum += coords.size();
  return sum;
}

HelperReads collect_reads(const RepairPlan& plan, const SymbolSource& source,
                          ReadTrace* trace) {
  HelperReads reads;
  for (uint32_t helper : plan.helpers) {
    auto& cells = reads[helper];
    for (uint64_t a : plan.coords) {
      cells[a] = source(helper, a);
      if (trace) trace->record(helper, a);
    }
  }
  return reads;
}

SymbolSource codeword_source(const Codeword& word) {
  return [&word](uint32_t node, uint64_t coord) {
    return word.cell(node, coord);
  };
}

AccessReport audit_access(const CodeParams& p, const RepairPlan& plan,
                          const ReadTrace& trace) {
  const std::set<uint64_t> planned(plan.coords.begin(), plan.coords.end());
  const std::set<uint32_t> helpers(plan.helpers.begin(), plan.helpers.end());
  AccessReport report;
  for (const auto& [node, coords] : trace.by_node()) {
    if (!helpers.count(node)) {
      throw RepairError("trace read node " + std::to_string(node) +
                        " outside the helper set");
    }
    for (uint64_t a : coords) {
      if (!planned.count(a)) {
        throw RepairError("trace read coordinate " + std::to_string(a) +
                          " outside the planned fiber");
      }
    }
    report.per_helper[node] = coords.size();
    report.accessed += coords.size();
  }
  report.downloaded = report.accessed;
  if (plan.mode == RepairMode::full) {
    report.bound_num = static_cast<uint64_t>(p.n - 1) * p.l;
    report.bound_den = p.n - p.k;
  } else {
    report.bound_num = static_cast<uint64_t>(plan.helpers.size()) * p.l;
    report.bound_den = p.s;
  }
  const uint64_t g = std::gcd(report.bound_num, report.bound_den);
  if (g > 0) {
    report.bound_num /= g;
    report.bound_den /= g;
  }
  report.optimal =
      report.accessed * report.bound_den == report.bound_num &&
      report.accessed > 0;
  return report;
}

}  // namespace oamc
