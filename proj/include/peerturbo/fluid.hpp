#pragma once

#include <cstddef>
#include <string_view>

#include "peerturbo/survival.hpp"

namespace peerturbo::fluid {

enum class Regime { no_turbo, peer_turbo };

std::string_view to_string(Regime r);
/// Accepts "no-turbo"/"no_turbo" and "peer-turbo"/"peer_turbo".
Regime parse_regime(std::string_view s);

struct FluidParams {
  std::size_t m = 1300;  // target nodes
  std::size_t k = 32;    // degrees of freedom needed to decode
  double alpha = 50.0;   // source shards per round, shared by all targets
  double p1 = 0.9;       // source -> target delivery probability
  double p2 = 0.9;       // target -> target delivery probability
  double dt = 1.0;       // seconds per round, reporting only
  Regime regime = Regime::no_turbo;

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;

  /// Per-node, per-round source delivery probability: min(p1 * alpha / m, 1).
  double source_coefficient() const;
};

/// F = (1, 0, ..., 0) at step 0.
SurvivalState init_state(const FluidParams& params);

/// F_i <- min(F_i + c1 (F_{i-1} - F_i), 1), computed from the round-s state.
SurvivalState step_no_turbo(const SurvivalState& state, const FluidParams& params);

/// F_i <- min(F_i + r (F_{i-1} - F_i), 1) with r = min(c1 + p2 F_i, 1), computed
/// from the round-s state.
SurvivalState step_peer_turbo(const SurvivalState& state, const FluidParams& params);

/// Dispatches on params.regime.
SurvivalState step(const SurvivalState& state, const FluidParams& params);

/// init_state followed by `horizon` steps; horizon + 1 states.
Trajectory run(const FluidParams& params, std::size_t horizon);

}  // namespace peerturbo::fluid
