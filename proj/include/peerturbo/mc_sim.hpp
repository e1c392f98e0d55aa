#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "peerturbo/fluid.hpp"
#include "peerturbo/random.hpp"
#include "peerturbo/rlnc.hpp"
#include "peerturbo/survival.hpp"

namespace peerturbo::mc {

enum class SourcePolicy { bernoulli_fluid, integer_schedule };
enum class PeerRule { conservative, rlnc_exact };

std::string_view to_string(SourcePolicy p);
std::string_view to_string(PeerRule r);
SourcePolicy parse_source_policy(std::string_view s);
PeerRule parse_peer_rule(std::string_view s);

struct McConfig {
  fluid::FluidParams fluid;
  unsigned q = 256;
  std::size_t l = 32;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  SourcePolicy source_policy = SourcePolicy::bernoulli_fluid;
  PeerRule peer_rule = PeerRule::conservative;
  std::size_t horizon = 0;
  /// Worker threads for run_ensemble; 0 picks hardware concurrency. Results
  /// do not depend on this value.
  unsigned threads = 0;

  void validate() const;
};

struct NodeState {
  rlnc::Decoder decoder;
  std::uint64_t receptions = 0;  // successful deliveries, innovative or not
};

/// Delivery accounting, summed over rounds and trials.
struct DeliveryCounters {
  std::uint64_t source_deliveries = 0;
  std::uint64_t peer_deliveries = 0;  // absorbed peer shards
  /// Peer shards absorbed from a donor whose start-of-round rank strictly
  /// exceeded the receiver's, and how many of those were not innovative.
  std::uint64_t from_higher = 0;
  std::uint64_t from_higher_non_innovative = 0;

  DeliveryCounters& operator+=(const DeliveryCounters& o);
};

/// Position of one round inside a run, used to derive its random substreams.
struct RoundKey {
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::uint64_t round = 0;
};

std::vector<NodeState> make_nodes(const McConfig& cfg);

/// Advances every node by one synchronous round. Peer shards are recoded from
/// start-of-round donor states and everything is absorbed at round end.
void run_round(std::vector<NodeState>& nodes, const rlnc::Payload& payload, const McConfig& cfg,
               const RoundKey& key, DeliveryCounters* counters = nullptr);

/// Node ranks after every round: m x (horizon + 1).
class RankMatrix {
 public:
  RankMatrix(std::size_t m, std::size_t horizon) : m_(m), horizon_(horizon), v_(m * (horizon + 1)) {}

  std::size_t m() const { return m_; }
  std::size_t horizon() const { return horizon_; }
  std::uint16_t& at(std::size_t node, std::size_t step) { return v_[step * m_ + node]; }
  std::uint16_t at(std::size_t node, std::size_t step) const { return v_[step * m_ + node]; }

  friend bool operator==(const RankMatrix&, const RankMatrix&) = default;

 private:
  std::size_t m_;
  std::size_t horizon_;
  std::vector<std::uint16_t> v_;
};

struct TrialResult {
  RankMatrix ranks;
  std::vector<std::uint64_t> receptions;  // per node, after the final round
  DeliveryCounters counters;
};

/// Deterministic in (cfg.seed, trial_index).
TrialResult run_trial(const McConfig& cfg, std::uint64_t trial_index);

/// Number of nodes with rank >= i, for each (dim i, step s).
std::vector<std::uint64_t> survival_counts(const RankMatrix& ranks, std::size_t k);

struct EnsembleSurvival {
  Surface mean_F;
  Surface stderr_F;  // standard error of the per-trial fraction; 0 when trials == 1
  std::size_t trials = 0;
  DeliveryCounters counters;
  /// decoded[t][s]: nodes of trial t holding all k degrees of freedom after round s.
  std::vector<std::vector<std::uint32_t>> decoded;
};

/// Averages the per-trial empirical survival function. Trials run on
/// cfg.threads workers; the reduction sums exact integer counts, so the output
/// is bit-identical for any thread count or completion order.
EnsembleSurvival run_ensemble(const McConfig& cfg);

}  // namespace peerturbo::mc
