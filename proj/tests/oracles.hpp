#pragma once

// Reference implementations used only by the tests. None of these share code
// with the library paths they check.

#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

/// Schoolbook carry-less product of two bytes reduced modulo `poly`.
inline std::uint8_t clmul_reduce(std::uint8_t a, std::uint8_t b, unsigned poly = 0x11B) {
  unsigned acc = 0;
  for (int bit = 0; bit < 8; ++bit) {
    if (b & (1u << bit)) acc ^= static_cast<unsigned>(a) << bit;
  }
  for (int bit = 14; bit >= 8; --bit) {
    if (acc & (1u << bit)) acc ^= poly << (bit - 8);
  }
  return static_cast<std::uint8_t>(acc);
}

/// Rank over GF(2) by enumerating the span: |span| = 2^rank. Vectors must have
/// length <= 16 and there must be at most 16 of them.
inline std::size_t gf2_rank_by_enumeration(const std::vector<std::vector<std::uint8_t>>& rows) {
  std::vector<unsigned> packed;
  for (const auto& r : rows) {
    unsigned v = 0;
    for (std::size_t i = 0; i < r.size(); ++i) v |= static_cast<unsigned>(r[i] & 1u) << i;
    packed.push_back(v);
  }
  std::set<unsigned> span;
  for (unsigned mask = 0; mask < (1u << packed.size()); ++mask) {
    unsigned v = 0;
    for (std::size_t i = 0; i < packed.size(); ++i) {
      if (mask & (1u << i)) v ^= packed[i];
    }
    span.insert(v);
  }
  std::size_t rank = 0;
  while ((std::size_t{1} << rank) < span.size()) ++rank;
  return rank;
}

}  // namespace oracle
