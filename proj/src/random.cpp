#include "peerturbo/random.hpp"

#include <bit>

namespace peerturbo {

namespace {

__extension__ using uint128 = unsigned __int128;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  std::uint64_t s = h ^ v;
  return splitmix64(s);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) {
  for (auto& w : s_) w = splitmix64(seed);
}

RandomStream RandomStream::derive(std::uint64_t root_seed, const StreamKey& key) {
  std::uint64_t h = mix(0x5EED5EED5EED5EEDULL, root_seed);
  h = mix(h, key.trial);
  h = mix(h, key.round);
  h = mix(h, key.node);
  h = mix(h, static_cast<std::uint64_t>(key.channel));
  return RandomStream(h);
}

RandomStream::result_type RandomStream::operator()() {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

std::uint64_t RandomStream::below(std::uint64_t bound) {
  // Lemire's nearly-divisionless rejection method.
  uint128 m = static_cast<uint128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<uint128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double RandomStream::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

}  // namespace peerturbo
