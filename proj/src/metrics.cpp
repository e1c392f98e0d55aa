#include "peerturbo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace peerturbo::metrics {

namespace {

void require_same_shape(const Surface& a, const Surface& b) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument("surface shape mismatch: k " + std::to_string(a.k()) + " vs " +
                                std::to_string(b.k()) + ", horizon " +
                                std::to_string(a.horizon()) + " vs " +
                                std::to_string(b.horizon()));
  }
}

std::optional<std::size_t> first_reaching(const Surface& surface, std::size_t dim, double level) {
  for (std::size_t s = 0; s <= surface.horizon(); ++s) {
    if (surface.at(dim, s) >= level) return s;
  }
  return std::nullopt;
}

}  // namespace

QuorumResult quorum_time(const Surface& surface, std::size_t dim, double phi, double dt) {
  if (!(phi > 0.0 && phi <= 1.0)) throw std::invalid_argument("phi must be in (0, 1]");
  if (dim > surface.k()) throw std::invalid_argument("dim exceeds k");
  QuorumResult r{phi, first_reaching(surface, dim, phi), std::nullopt};
  if (r.steps) r.seconds = static_cast<double>(*r.steps) * dt;
  return r;
}

QuorumResult quorum_time(const Trajectory& traj, std::size_t dim, double phi, double dt) {
  return quorum_time(Surface::from_trajectory(traj), dim, phi, dt);
}

QuorumResult quorum_from_counts(const std::vector<std::uint32_t>& decoded, std::size_t m,
                                double phi, double dt) {
  if (!(phi > 0.0 && phi <= 1.0)) throw std::invalid_argument("phi must be in (0, 1]");
  if (m == 0) throw std::invalid_argument("m must be >= 1");
  QuorumResult r{phi, std::nullopt, std::nullopt};
  for (std::size_t s = 0; s < decoded.size(); ++s) {
    if (static_cast<double>(decoded[s]) / static_cast<double>(m) >= phi) {
      r.steps = s;
      r.seconds = static_cast<double>(s) * dt;
      break;
    }
  }
  return r;
}

Surface diff_surface(const Surface& a, const Surface& b) {
  require_same_shape(a, b);
  Surface out(a.k(), a.horizon());
  for (std::size_t s = 0; s <= a.horizon(); ++s) {
    for (std::size_t i = 0; i <= a.k(); ++i) out.at(i, s) = b.at(i, s) - a.at(i, s);
  }
  return out;
}

Surface diff_surface(const Trajectory& a, const Trajectory& b) {
  return diff_surface(Surface::from_trajectory(a), Surface::from_trajectory(b));
}

double sup_norm_deviation(const Surface& a, const Surface& b) {
  require_same_shape(a, b);
  double worst = 0.0;
  for (std::size_t s = 0; s <= a.horizon(); ++s) {
    for (std::size_t i = 0; i <= a.k(); ++i) worst = std::max(worst, std::abs(a.at(i, s) - b.at(i, s)));
  }
  return worst;
}

std::optional<std::size_t> transition_width(const Surface& surface, std::size_t dim, double lo,
                                            double hi) {
  if (!(lo > 0.0 && lo < hi && hi < 1.0)) {
    throw std::invalid_argument("transition width needs 0 < lo < hi < 1");
  }
  if (dim > surface.k()) throw std::invalid_argument("dim exceeds k");
  const auto t_hi = first_reaching(surface, dim, hi);
  if (!t_hi) return std::nullopt;
  // lo < hi, so lo is reached no later than hi.
  return *t_hi - *first_reaching(surface, dim, lo);
}

std::vector<QuorumRow> quorum_table(const std::vector<fluid::FluidParams>& grid, double phi,
                                    std::size_t horizon) {
  if (grid.empty()) throw std::invalid_argument("empty parameter grid");
  std::vector<QuorumRow> rows;
  rows.reserve(grid.size() * 2);
  for (const auto& point : grid) {
    for (auto regime : {fluid::Regime::no_turbo, fluid::Regime::peer_turbo}) {
      auto p = point;
      p.regime = regime;
      const auto traj = fluid::run(p, horizon);
      rows.push_back({p, quorum_time(traj, p.k, phi, p.dt)});
    }
  }
  return rows;
}

}  // namespace peerturbo::metrics
