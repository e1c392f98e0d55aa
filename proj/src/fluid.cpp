#include "peerturbo/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace peerturbo::fluid {

std::string_view to_string(Regime r) {
  return r == Regime::no_turbo ? "no-turbo" : "peer-turbo";
}

Regime parse_regime(std::string_view s) {
  if (s == "no-turbo" || s == "no_turbo") return Regime::no_turbo;
  if (s == "peer-turbo" || s == "peer_turbo") return Regime::peer_turbo;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

namespace {

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

template <class PeerTerm>
SurvivalState advance(const SurvivalState& state, double c1, PeerTerm peer) {
  SurvivalState next{state.step + 1, state.F};
  const auto& F = state.F;
  for (std::size_t i = 1; i < F.size(); ++i) {
    const double entering = F[i - 1] - F[i];
    // A transition probability above 1 would overshoot F_{i-1} and break
    // monotonicity in i.
    const double rate = std::min(c1 + peer(F[i]), 1.0);
    next.F[i] = std::min(F[i] + rate * entering, 1.0);
  }
  return next;
}

}  // namespace

void FluidParams::validate() const {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(std::isfinite(alpha) && alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (!is_probability(p1)) throw std::invalid_argument("p1 must be in [0,1]");
  if (!is_probability(p2)) throw std::invalid_argument("p2 must be in [0,1]");
  if (!(std::isfinite(dt) && dt > 0.0)) throw std::invalid_argument("dt must be > 0");
}

double FluidParams::source_coefficient() const {
  return std::min(p1 * alpha / static_cast<double>(m), 1.0);
}

SurvivalState init_state(const FluidParams& params) {
  SurvivalState s{0, std::vector<double>(params.k + 1, 0.0)};
  s.F[0] = 1.0;
  return s;
}

SurvivalState step_no_turbo(const SurvivalState& state, const FluidParams& params) {
  return advance(state, params.source_coefficient(), [](double) { return 0.0; });
}

SurvivalState step_peer_turbo(const SurvivalState& state, const FluidParams& params) {
  const double p2 = params.p2;
  return advance(state, params.source_coefficient(), [p2](double Fi) { return p2 * Fi; });
}

SurvivalState step(const SurvivalState& state, const FluidParams& params) {
  return params.regime == Regime::peer_turbo ? step_peer_turbo(state, params)
                                             : step_no_turbo(state, params);
}

Trajectory run(const FluidParams& params, std::size_t horizon) {
  params.validate();
  Trajectory traj;
  traj.reserve(horizon + 1);
  traj.push_back(init_state(params));
  for (std::size_t s = 0; s < horizon; ++s) traj.push_back(step(traj.back(), params));
  return traj;
}

}  // namespace peerturbo::fluid
