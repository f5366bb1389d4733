#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "oamc/errors.hpp"

namespace oamc {

// Canonical integer encoding of a field element: the residue for prime
// fields, the polynomial coefficient bits for binary fields.
using Symbol = uint32_t;

enum class FieldKind : uint8_t { prime = 0, binary = 1 };

// Description of a finite field: GF(p) for a prime p, or GF(2^w) with an
// irreducible reduction polynomial given as a bitmask that includes the
// x^w term (e.g. 0x11d for x^8+x^4+x^3+x^2+1).
struct FieldSpec {
  FieldKind kind = FieldKind::prime;
  uint32_t prime = 0;  // kind == prime
  uint32_t width = 0;  // kind == binary
  uint32_t poly = 0;   // kind == binary

  uint64_t order() const {
    return kind == FieldKind::prime ? prime : (uint64_t{1} << width);
  }

  static FieldSpec make_prime(uint32_t p);
  static FieldSpec make_binary(uint32_t width, uint32_t poly);
  static FieldSpec gf256();    // GF(2^8), poly 0x11d
  static FieldSpec gf65536();  // GF(2^16), poly 0x1100b

  // Wire format: one byte kind (0=prime, 1=binary) followed by a u32
  // little-endian parameter (p, or (w<<24)|poly).
  void serialize(std::vector<uint8_t>& out) const;
  static FieldSpec deserialize(const uint8_t* data, size_t size, size_t& off);

  bool operator==(const FieldSpec&) const = default;
};

// Arithmetic engine for one field. Construction validates the spec
// (primality resp. irreducibility) and precomputes log/antilog tables for
// widths up to 8; wider binary fields multiply by carry-less product plus
// reduction. A built Field is immutable and safe to share across threads.
class Field {
 public:
  explicit Field(const FieldSpec& spec);

  const FieldSpec& spec() const { return spec_; }
  uint64_t order() const { return order_; }

  Symbol add(Symbol a, Symbol b) const;
  Symbol sub(Symbol a, Symbol b) const;
  Symbol neg(Symbol a) const;
  Symbol mul(Symbol a, Symbol b) const;
  Symbol inv(Symbol a) const;  // throws ArithmeticError for a == 0
  Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }

  // x^t by square-and-multiply, with 0^0 = 1.
  Symbol pow(Symbol a, uint64_t t) const;

  // Canonical enumeration of elements: element(j) has encoding j.
  Symbol element(uint64_t index) const;

 private:
  void build_log_tables();

  FieldSpec spec_;
  uint64_t order_ = 0;
  std::vector<uint16_t> log_;  // binary fields, width <= 8
  std::vector<uint16_t> exp_;
};

// A field element bound to its Field. Operators check that both operands
// come from the same field spec and throw FieldMismatchError otherwise.
// The element keeps a reference to the Field passed at construction.
class FieldElement {
 public:
  FieldElement(const Field& field, Symbol value);

  Symbol value() const { return value_; }
  const Field& field() const { return *field_; }

  FieldElement inverse() const;
  FieldElement pow(uint64_t t) const;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_->spec() == b.field_->spec() && a.value_ == b.value_;
  }

 private:
  const Field* field_;
  Symbol value_;
};

}  // namespace oamc
