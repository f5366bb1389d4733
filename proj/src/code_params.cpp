#include "oamc/code_params.hpp"

#include <algorithm>

#include "oamc/errors.hpp"

namespace oamc {

namespace {

constexpr uint64_t max_subpacketization = uint64_t{1} << 32;

uint64_t checked_pow(uint64_t base, uint32_t exp) {
  uint64_t v = 1;
  for (uint32_t i = 0; i < exp; ++i) {
    if (v > max_subpacketization / base) {
      throw ParamError("sub-packetization overflows the supported range");
    }
    v *= base;
  }
  return v;
}

void require_u16(uint64_t v, const char* name) {
  if (v > 0xffff) {
    throw ParamError(std::string(name) + " exceeds the u16 wire range");
  }
}

void write_u16le(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

uint16_t read_u16le(const uint8_t* data, size_t& off) {
  const uint16_t v = static_cast<uint16_t>(data[off]) |
                     static_cast<uint16_t>(data[off + 1]) << 8;
  off += 2;
  return v;
}

// Shared finish step: derive l, n, k, evaluation points and twist, and
// check the field is large enough for `points` distinct elements.
void finish_params(CodeParams& p, uint32_t points) {
  p.k = p.n - p.r;
  if (p.field.order() < points) {
    throw ParamError("field order " + std::to_string(p.field.order()) +
                     " violates |F| >= " + std::to_string(points));
  }
  if (p.field.order() < 3) {
    throw ParamError("field order violates |F| >= 3 (no valid twist)");
  }
  p.eval_points.resize(points);
  for (uint32_t i = 0; i < points; ++i) {
    p.eval_points[i] = p.field.element(i);
  }
  p.twist = p.field.element(2);
}

void require_wire_range(uint32_t s, uint32_t r, uint32_t m, uint32_t rprime) {
  require_u16(s, "s");
  require_u16(r, "r");
  require_u16(m, "m");
  require_u16(rprime, "r'");
}

}  // namespace

CodeParams CodeParams::construction1(uint32_t s, uint32_t r, uint32_t m,
                                     const FieldSpec& fs) {
  if (s < 1 || m < 1) throw ParamError("s and m must be positive");
  require_wire_range(s, r, m, 0);
  if (s > r) throw ParamError("constraint s <= r violated");
  if (r > s * m) throw ParamError("constraint r <= s*m violated");
  CodeParams p{.construction = 1,
               .s = s,
               .r = r,
               .m = m,
               .rprime = 0,
               .n = s * m,
               .k = 0,
               .l = checked_pow(s, m),
               .field = Field(fs),
               .eval_points = {},
               .twist = 0};
  finish_params(p, p.n);
  return p;
}

CodeParams CodeParams::construction2(uint32_t r, uint32_t m, uint32_t rprime,
                                     const FieldSpec& fs) {
  if (r < 2 || m < 1) throw ParamError("construction 2 needs r >= 2, m >= 1");
  require_wire_range(r, r, m, rprime);
  if (rprime < 1 || rprime > r - 1) {
    throw ParamError("constraint 1 <= r' <= r-1 violated");
  }
  CodeParams p{.construction = 2,
               .s = r,
               .r = r,
               .m = m,
               .rprime = rprime,
               .n = r * m + rprime,
               .k = 0,
               .l = checked_pow(r, m + 1),
               .field = Field(fs),
               .eval_points = {},
               .twist = 0};
  finish_params(p, r * (m + 1));
  return p;
}

CodeParams make_params(int construction, uint32_t s, uint32_t r, uint32_t m,
                       uint32_t rprime, const FieldSpec& fs) {
  if (construction == 1) {
    if (rprime != 0) throw ParamError("construction 1 takes no r'");
    return CodeParams::construction1(s, r, m, fs);
  }
  if (construction == 2) {
    if (s != 0 && s != r) {
      throw ParamError("construction 2 fixes the digit base to r");
    }
    return CodeParams::construction2(r, m, rprime, fs);
  }
  throw ParamError("construction must be 1 or 2");
}

uint32_t CodeParams::group_of(uint32_t node) const {
  if (node < 1 || node > n) throw DimensionError("node index out of range");
  return (node - 1) / digit_base() + 1;
}

uint32_t CodeParams::slot_of(uint32_t node) const {
  if (node < 1 || node > n) throw DimensionError("node index out of range");
  return (node - 1) % digit_base();
}

uint32_t CodeParams::digit(uint64_t a, uint32_t axis) const {
  if (a >= l) throw DimensionError("coordinate out of range");
  if (axis < 1 || axis > axes()) throw DimensionError("axis out of range");
  uint64_t v = a;
  for (uint32_t i = 1; i < axis; ++i) v /= digit_base();
  return static_cast<uint32_t>(v % digit_base());
}

uint64_t CodeParams::with_digit(uint64_t a, uint32_t axis,
                                uint32_t value) const {
  if (value >= digit_base()) throw DimensionError("digit value out of range");
  const uint32_t old = digit(a, axis);
  uint64_t scale = 1;
  for (uint32_t i = 1; i < axis; ++i) scale *= digit_base();
  return a + (static_cast<uint64_t>(value) - old) * scale;
}

Symbol CodeParams::group_eval_point(uint32_t v, uint32_t w) const {
  const uint64_t idx = static_cast<uint64_t>(v - 1) * digit_base() + w;
  return eval_points.at(idx);
}

std::vector<uint64_t> CodeParams::fiber_coords(uint32_t v, uint32_t u) const {
  std::vector<uint64_t> coords;
  coords.reserve(l / digit_base());
  for (uint64_t a = 0; a < l; ++a) {
    if (digit(a, v) == u) coords.push_back(a);
  }
  return coords;
}

std::vector<uint32_t> CodeParams::group_nodes(uint32_t v) const {
  if (v < 1 || v > axes()) throw DimensionError("group index out of range");
  std::vector<uint32_t> nodes;
  for (uint32_t w = 0; w < digit_base(); ++w) {
    const uint32_t node = (v - 1) * digit_base() + w + 1;
    if (node <= n) nodes.push_back(node);
  }
  return nodes;
}

std::vector<uint8_t> CodeParams::serialize() const {
  std::vector<uint8_t> out;
  out.push_back(static_cast<uint8_t>(construction));
  write_u16le(out, static_cast<uint16_t>(s));
  write_u16le(out, static_cast<uint16_t>(r));
  write_u16le(out, static_cast<uint16_t>(m));
  write_u16le(out, static_cast<uint16_t>(rprime));
  field.spec().serialize(out);
  return out;
}

CodeParams CodeParams::deserialize(const uint8_t* data, size_t size,
                                   size_t& off) {
  if (size - off < 9) throw ParamError("truncated code params");
  const int construction = data[off++];
  const uint16_t s = read_u16le(data, off);
  const uint16_t r = read_u16le(data, off);
  const uint16_t m = read_u16le(data, off);
  const uint16_t rprime = read_u16le(data, off);
  const FieldSpec fs = FieldSpec::deserialize(data, size, off);
  return make_params(construction, construction == 2 ? 0 : s, r, m, rprime,
                     fs);
}

std::string CodeParams::fingerprint_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (uint8_t b : serialize()) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

Symbol matrix_entry(const CodeParams& p, uint32_t t, uint32_t node, uint64_t a,
                    uint64_t b) {
  if (t >= p.r) throw DimensionError("parity row index out of range");
  if (b >= p.l) throw DimensionError("coordinate out of range");
  const uint32_t v = p.group_of(node);
  const uint32_t u = p.slot_of(node);
  const uint32_t d = p.digit(a, v);
  if (d == u) {
    // Row a carries the whole group's powers at the digit-v rewrites of a.
    const uint32_t w = p.digit(b, v);
    if (p.with_digit(a, v, w) != b) return 0;
    return p.field.pow(p.group_eval_point(v, w), t);
  }
  if (b != a) return 0;
  const Symbol base = p.field.pow(p.eval_points[node - 1], t);
  return d > u ? p.field.mul(p.twist, base) : base;
}

std::vector<RowEntry> row_support(const CodeParams& p, uint32_t t,
                                  uint32_t node, uint64_t a) {
  if (t >= p.r) throw DimensionError("parity row index out of range");
  const uint32_t v = p.group_of(node);
  const uint32_t u = p.slot_of(node);
  const uint32_t d = p.digit(a, v);
  std::vector<RowEntry> entries;
  if (d != u) {
    const Symbol base = p.field.pow(p.eval_points[node - 1], t);
    entries.push_back(
        {a, d > u ? p.field.mul(p.twist, base) : base});
    return entries;
  }
  entries.reserve(p.digit_base());
  for (uint32_t w = 0; w < p.digit_base(); ++w) {
    entries.push_back({p.with_digit(a, v, w),
                       p.field.pow(p.group_eval_point(v, w), t)});
  }
  std::sort(entries.begin(), entries.end(),
            [](const RowEntry& x, const RowEntry& y) { return x.col < y.col; });
  return entries;
}

}  // namespace oamc
