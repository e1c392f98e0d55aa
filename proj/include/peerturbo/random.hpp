#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace peerturbo {

/// Logical purpose of a random substream. Each channel gets its own stream so
/// that turning one mechanism off never perturbs the draws of another.
enum class Channel : std::uint64_t {
  payload = 1,
  source = 2,          // bernoulli_fluid delivery / integer_schedule target pick
  source_loss = 3,     // integer_schedule per-shard p1 loss
  source_coeffs = 4,
  peer_select = 5,
  peer_loss = 6,
  peer_coeffs = 7,
};

/// Identifies one substream under a root seed.
struct StreamKey {
  std::uint64_t trial = 0;
  std::uint64_t round = 0;
  std::uint64_t node = 0;
  Channel channel = Channel::payload;
};

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator.
///
/// Streams are cheap to construct, so the simulator derives a fresh one per
/// (trial, round, node, channel) instead of sharing a generator across nodes.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed);
  static RandomStream derive(std::uint64_t root_seed, const StreamKey& key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace peerturbo
