#include "peerturbo/survival.hpp"

#include <stdexcept>

namespace peerturbo {

std::optional<std::string> check_survival_state(const SurvivalState& s, double tol) {
  if (s.F.empty()) return "empty survival vector";
  if (s.F[0] < 1.0 - tol || s.F[0] > 1.0 + tol) {
    return "F_0 = " + std::to_string(s.F[0]) + " != 1 at step " + std::to_string(s.step);
  }
  for (std::size_t i = 0; i < s.F.size(); ++i) {
    if (s.F[i] < -tol || s.F[i] > 1.0 + tol) {
      return "F_" + std::to_string(i) + " out of [0,1] at step " + std::to_string(s.step);
    }
    if (i + 1 < s.F.size() && s.F[i + 1] > s.F[i] + tol) {
      return "F_" + std::to_string(i + 1) + " > F_" + std::to_string(i) + " at step " +
             std::to_string(s.step);
    }
  }
  return std::nullopt;
}

Surface::Surface(std::size_t k, std::size_t horizon, double fill)
    : k_(k), horizon_(horizon), v_((k + 1) * (horizon + 1), fill) {}

Surface Surface::from_trajectory(const Trajectory& traj) {
  if (traj.empty()) throw std::invalid_argument("empty trajectory");
  Surface out(traj.front().k(), traj.size() - 1);
  for (std::size_t s = 0; s < traj.size(); ++s) {
    if (traj[s].k() != out.k()) throw std::invalid_argument("trajectory with varying k");
    for (std::size_t i = 0; i <= out.k(); ++i) out.at(i, s) = traj[s].F[i];
  }
  return out;
}

SurvivalState Surface::column(std::size_t step) const {
  SurvivalState s{step, std::vector<double>(k_ + 1)};
  for (std::size_t i = 0; i <= k_; ++i) s.F[i] = at(i, step);
  return s;
}

}  // namespace peerturbo
