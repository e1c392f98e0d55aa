#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace peerturbo {

/// Population survival function after `step` rounds: F[i] is the fraction of
/// target nodes holding at least i degrees of freedom, for i = 0..k.
struct SurvivalState {
  std::size_t step = 0;
  std::vector<double> F;

  std::size_t k() const { return F.empty() ? 0 : F.size() - 1; }
  /// Fraction holding exactly i degrees of freedom (F_i - F_{i+1}; F_k for i = k).
  double exactly(std::size_t i) const { return i < k() ? F[i] - F[i + 1] : F[i]; }
};

using Trajectory = std::vector<SurvivalState>;

/// Returns a description of the first violated invariant, or nullopt.
/// Checks F_0 = 1, 0 <= F_i <= 1 and F_i >= F_{i+1}, all within `tol`.
std::optional<std::string> check_survival_state(const SurvivalState& s, double tol = 1e-12);

/// Dense (dim, step) matrix of fractions: dims 0..k by steps 0..horizon.
class Surface {
 public:
  Surface() = default;
  Surface(std::size_t k, std::size_t horizon, double fill = 0.0);

  static Surface from_trajectory(const Trajectory& traj);

  std::size_t k() const { return k_; }
  std::size_t horizon() const { return horizon_; }
  double& at(std::size_t dim, std::size_t step) { return v_[step * (k_ + 1) + dim]; }
  double at(std::size_t dim, std::size_t step) const { return v_[step * (k_ + 1) + dim]; }
  bool same_shape(const Surface& o) const { return k_ == o.k_ && horizon_ == o.horizon_; }

  /// Column `step` as a survival state.
  SurvivalState column(std::size_t step) const;

 private:
  std::size_t k_ = 0;
  std::size_t horizon_ = 0;
  std::vector<double> v_;
};

}  // namespace peerturbo
