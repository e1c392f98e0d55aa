#include "peerturbo/galois.hpp"

#include <cassert>
#include <string>

namespace peerturbo::gf {

namespace {

// Multiply by 0x03, which generates the multiplicative group under 0x11B
// (0x02 does not).
unsigned times_generator(unsigned x) {
  unsigned doubled = x << 1;
  if (doubled & 0x100) doubled ^= kPolynomial256;
  return doubled ^ x;
}

}  // namespace

Field::Field(unsigned q) : q_(q) {
  if (q == 2) {
    mul_[1][1] = 1;
    inv_[1] = 1;
    return;
  }

  std::array<Element, 512> exp{};
  std::array<int, 256> log{};
  unsigned x = 1;
  for (int i = 0; i < 255; ++i) {
    exp[i] = static_cast<Element>(x);
    log[x] = i;
    x = times_generator(x);
  }
  for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];

  for (unsigned a = 1; a < 256; ++a) {
    for (unsigned b = 1; b < 256; ++b) mul_[a][b] = exp[log[a] + log[b]];
    inv_[a] = exp[255 - log[a]];
  }
}

const Field& Field::of(unsigned q) {
  static const Field f2(2);
  static const Field f256(256);
  if (q == 2) return f2;
  if (q == 256) return f256;
  throw std::invalid_argument("unsupported field size q=" + std::to_string(q) +
                              " (expected 2 or 256)");
}

Element Field::inv(Element a) const {
  if (a == 0) throw DivisionByZero();
  return inv_[a];
}

void Field::axpy(std::span<Element> dst, Element c, std::span<const Element> src) const {
  assert(dst.size() == src.size());
  if (c == 0) return;
  if (c == 1) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
    return;
  }
  const auto& row = mul_[c];
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= row[src[i]];
}

void Field::scale(std::span<Element> v, Element c) const {
  if (c == 1) return;
  const auto& row = mul_[c];
  for (auto& e : v) e = row[e];
}

Element Field::dot(std::span<const Element> a, std::span<const Element> b) const {
  assert(a.size() == b.size());
  Element acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc ^= mul_[a[i]][b[i]];
  return acc;
}

}  // namespace peerturbo::gf
