#include "oamc/field.hpp"

#include <string>

namespace oamc {

namespace {

bool is_prime(uint32_t p) {
  if (p < 2) return false;
  if (p % 2 == 0) return p == 2;
  for (uint64_t d = 3; d * d <= p; d += 2) {
    if (p % d == 0) return false;
  }
  return true;
}

int gf2_degree(uint64_t a) {
  int d = -1;
  while (a) {
    ++d;
    a >>= 1;
  }
  return d;
}

// Product of two GF(2)[x] polynomials reduced mod `mod`.
uint64_t gf2_mulmod(uint64_t a, uint64_t b, uint64_t mod) {
  const int md = gf2_degree(mod);
  uint64_t acc = 0;
  while (b) {
    if (b & 1) acc ^= a;
    b >>= 1;
    a <<= 1;
    if (gf2_degree(a) == md) a ^= mod;
  }
  return acc;
}

uint64_t gf2_gcd(uint64_t a, uint64_t b) {
  while (b) {
    int da = gf2_degree(a);
    int db = gf2_degree(b);
    if (da < db) {
      std::swap(a, b);
      std::swap(da, db);
    }
    a ^= b << (da - db);
  }
  return a;
}

// Rabin irreducibility test for a degree-w polynomial over GF(2):
// x^(2^w) == x mod p, and gcd(x^(2^(w/q)) - x, p) = 1 for every prime q | w.
bool gf2_irreducible(uint32_t poly, uint32_t w) {
  if (gf2_degree(poly) != static_cast<int>(w)) return false;
  auto frobenius = [&](uint64_t t, uint32_t times) {
    for (uint32_t i = 0; i < times; ++i) t = gf2_mulmod(t, t, poly);
    return t;
  };
  const uint64_t x = 2;
  if (frobenius(x, w) != x) return false;
  for (uint32_t q = 2, rem = w; rem > 1; ++q) {
    if (rem % q != 0) continue;
    while (rem % q == 0) rem /= q;
    const uint64_t t = frobenius(x, w / q) ^ x;
    if (t == 0 || gf2_gcd(t, poly) != 1) return false;
  }
  return true;
}

// Carry-less multiply then reduce; the table builder and the wide-field
// multiply both land here.
Symbol clmul_reduce(Symbol a, Symbol b, uint32_t poly, uint32_t w) {
  uint64_t acc = 0;
  uint64_t x = a;
  while (b) {
    if (b & 1) acc ^= x;
    x <<= 1;
    b >>= 1;
  }
  for (int bit = 2 * static_cast<int>(w) - 2; bit >= static_cast<int>(w);
       --bit) {
    if ((acc >> bit) & 1) acc ^= static_cast<uint64_t>(poly) << (bit - w);
  }
  return static_cast<Symbol>(acc);
}

void require_same_spec(const FieldElement& a, const FieldElement& b) {
  if (!(a.field().spec() == b.field().spec())) {
    throw FieldMismatchError("operands belong to different field specs");
  }
}

}  // namespace

FieldSpec FieldSpec::make_prime(uint32_t p) {
  if (!is_prime(p)) {
    throw ParamError("field characteristic " + std::to_string(p) +
                     " is not prime");
  }
  FieldSpec s;
  s.kind = FieldKind::prime;
  s.prime = p;
  return s;
}

FieldSpec FieldSpec::make_binary(uint32_t width, uint32_t poly) {
  if (width != 8 && width != 16) {
    throw ParamError("binary field width must be 8 or 16");
  }
  if (!gf2_irreducible(poly, width)) {
    throw ParamError("reduction polynomial is not irreducible of degree " +
                     std::to_string(width));
  }
  FieldSpec s;
  s.kind = FieldKind::binary;
  s.width = width;
  s.poly = poly;
  return s;
}

FieldSpec FieldSpec::gf256() { return make_binary(8, 0x11d); }

FieldSpec FieldSpec::gf65536() { return make_binary(16, 0x1100b); }

void FieldSpec::serialize(std::vector<uint8_t>& out) const {
  out.push_back(static_cast<uint8_t>(kind));
  const uint32_t param =
      kind == FieldKind::prime ? prime : ((width << 24) | poly);
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<uint8_t>(param >> (8 * i)));
  }
}

FieldSpec FieldSpec::deserialize(const uint8_t* data, size_t size,
                                 size_t& off) {
  if (size - off < 5) throw ParamError("truncated field spec");
  const uint8_t kind = data[off++];
  uint32_t param = 0;
  for (int i = 0; i < 4; ++i) {
    param |= static_cast<uint32_t>(data[off++]) << (8 * i);
  }
  if (kind == static_cast<uint8_t>(FieldKind::prime)) {
    return make_prime(param);
  }
  if (kind == static_cast<uint8_t>(FieldKind::binary)) {
    return make_binary(param >> 24, param & 0x00ffffff);
  }
  throw ParamError("unknown field kind byte");
}

Field::Field(const FieldSpec& spec) : spec_(spec), order_(spec.order()) {
  if (spec_.kind == FieldKind::prime) {
    if (!is_prime(spec_.prime)) {
      throw ParamError("field characteristic is not prime");
    }
  } else {
    if (!gf2_irreducible(spec_.poly, spec_.width)) {
      throw ParamError("reduction polynomial is not irreducible");
    }
    if (spec_.width <= 8) build_log_tables();
  }
}

void Field::build_log_tables() {
  const uint32_t group = static_cast<uint32_t>(order_) - 1;
  // Try successive generator candidates; an irreducible polynomial
  // guarantees one exists, though x itself need not be primitive.
  for (Symbol g = 2; g < order_; ++g) {
    exp_.assign(group, 0);
    log_.assign(order_, 0);
    Symbol x = 1;
    bool full_order = true;
    for (uint32_t i = 0; i < group; ++i) {
      if (i > 0 && x == 1) {
        full_order = false;
        break;
      }
      exp_[i] = static_cast<uint16_t>(x);
      log_[x] = static_cast<uint16_t>(i);
      x = clmul_reduce(x, g, spec_.poly, spec_.width);
    }
    if (full_order && x == 1) return;
  }
  throw ParamError("no multiplicative generator found");
}

Symbol Field::add(Symbol a, Symbol b) const {
  if (spec_.kind == FieldKind::prime) {
    const uint64_t s = static_cast<uint64_t>(a) + b;
    return static_cast<Symbol>(s >= order_ ? s - order_ : s);
  }
  return a ^ b;
}

Symbol Field::sub(Symbol a, Symbol b) const {
  if (spec_.kind == FieldKind::prime) {
    return static_cast<Symbol>(a >= b ? a - b : a + order_ - b);
  }
  return a ^ b;
}

Symbol Field::neg(Symbol a) const {
  if (spec_.kind == FieldKind::prime) {
    return a == 0 ? 0 : static_cast<Symbol>(order_ - a);
  }
  return a;
}

Symbol Field::mul(Symbol a, Symbol b) const {
  if (spec_.kind == FieldKind::prime) {
    return static_cast<Symbol>(static_cast<uint64_t>(a) * b % order_);
  }
  if (!exp_.empty()) {
    if (a == 0 || b == 0) return 0;
    const uint32_t group = static_cast<uint32_t>(order_) - 1;
    return exp_[(static_cast<uint32_t>(log_[a]) + log_[b]) % group];
  }
  return clmul_reduce(a, b, spec_.poly, spec_.width);
}

Symbol Field::inv(Symbol a) const {
  if (a == 0) throw ArithmeticError("zero has no multiplicative inverse");
  if (spec_.kind == FieldKind::binary && !exp_.empty()) {
    const uint32_t group = static_cast<uint32_t>(order_) - 1;
    return exp_[(group - log_[a]) % group];
  }
  return pow(a, order_ - 2);
}

Symbol Field::pow(Symbol a, uint64_t t) const {
  Symbol result = 1;
  Symbol base = a;
  while (t) {
    if (t & 1) result = mul(result, base);
    base = mul(base, base);
    t >>= 1;
  }
  return result;
}

Symbol Field::element(uint64_t index) const {
  if (index >= order_) {
    throw ArithmeticError("element index " + std::to_string(index) +
                          " out of range for field of order " +
                          std::to_string(order_));
  }
  return static_cast<Symbol>(index);
}

FieldElement::FieldElement(const Field& field, Symbol value)
    : field_(&field), value_(value) {
  if (value >= field.order()) {
    throw ArithmeticError("value outside canonical encoding range");
  }
}

FieldElement FieldElement::inverse() const {
  return FieldElement(*field_, field_->inv(value_));
}

FieldElement FieldElement::pow(uint64_t t) const {
  return FieldElement(*field_, field_->pow(value_, t));
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  require_same_spec(a, b);
  return FieldElement(*a.field_, a.field_->add(a.value_, b.value_));
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  require_same_spec(a, b);
  return FieldElement(*a.field_, a.field_->sub(a.value_, b.value_));
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  require_same_spec(a, b);
  return FieldElement(*a.field_, a.field_->mul(a.value_, b.value_));
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  require_same_spec(a, b);
  return FieldElement(*a.field_, a.field_->div(a.value_, b.value_));
}

}  // namespace oamc
