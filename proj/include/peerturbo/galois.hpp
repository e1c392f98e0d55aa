#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace peerturbo::gf {

/// One field element stored in a byte. Valid values are [0, q).
using Element = std::uint8_t;

/// Byte polynomial used for GF(256): x^8 + x^4 + x^3 + x + 1.
inline constexpr unsigned kPolynomial256 = 0x11B;

class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero() : std::domain_error("division by zero in GF(q)") {}
};

/// Arithmetic in GF(2) or GF(256).
///
/// Both fields are characteristic 2, so addition is XOR. Multiplication goes
/// through a full 256x256 product table; GF(2) fills it with the 1-bit AND so
/// the bulk kernels share one code path.
class Field {
 public:
  /// Returns the field of order `q`. Throws std::invalid_argument unless q is 2 or 256.
  static const Field& of(unsigned q);
  static const Field& gf2() { return of(2); }
  static const Field& gf256() { return of(256); }

  unsigned order() const { return q_; }
  bool contains(unsigned value) const { return value < q_; }

  Element add(Element a, Element b) const { return a ^ b; }
  Element sub(Element a, Element b) const { return a ^ b; }
  Element mul(Element a, Element b) const { return mul_[a][b]; }
  Element inv(Element a) const;
  Element div(Element a, Element b) const { return mul(a, inv(b)); }

  /// dst[i] += c * src[i]
  void axpy(std::span<Element> dst, Element c, std::span<const Element> src) const;
  /// v[i] *= c
  void scale(std::span<Element> v, Element c) const;
  /// Inner product over the field.
  Element dot(std::span<const Element> a, std::span<const Element> b) const;

  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

 private:
  explicit Field(unsigned q);

  unsigned q_;
  std::array<std::array<Element, 256>, 256> mul_{};
  std::array<Element, 256> inv_{};
};

}  // namespace peerturbo::gf
