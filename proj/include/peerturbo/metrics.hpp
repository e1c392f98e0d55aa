#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "peerturbo/fluid.hpp"
#include "peerturbo/survival.hpp"

namespace peerturbo::metrics {

/// First round at which a fraction `phi` of nodes can decode. `steps` and
/// `seconds` are empty when the quorum is not reached within the horizon.
struct QuorumResult {
  double phi = 0.0;
  std::optional<std::size_t> steps;
  std::optional<double> seconds;

  bool reached() const { return steps.has_value(); }
};

/// Smallest s with F_dim(s) >= phi. Throws std::invalid_argument unless
/// 0 < phi <= 1 and dim <= k.
QuorumResult quorum_time(const Surface& surface, std::size_t dim, double phi, double dt = 1.0);
QuorumResult quorum_time(const Trajectory& traj, std::size_t dim, double phi, double dt = 1.0);

/// Quorum of one Monte Carlo trial from its per-round count of decoded nodes.
QuorumResult quorum_from_counts(const std::vector<std::uint32_t>& decoded, std::size_t m,
                                double phi, double dt = 1.0);

/// Entry (i, s) = b(i, s) - a(i, s). Throws std::invalid_argument on shape mismatch.
Surface diff_surface(const Surface& a, const Surface& b);
Surface diff_surface(const Trajectory& a, const Trajectory& b);

/// max |a(i, s) - b(i, s)| over all cells. Throws on shape mismatch.
double sup_norm_deviation(const Surface& a, const Surface& b);

/// Rounds between F_dim first reaching `lo` and first reaching `hi`; empty if
/// `hi` is never reached. Throws std::invalid_argument unless 0 < lo < hi < 1.
std::optional<std::size_t> transition_width(const Surface& surface, std::size_t dim, double lo,
                                            double hi);

struct QuorumRow {
  fluid::FluidParams params;  // regime identifies the row's mode
  QuorumResult result;
};

/// Fluid quorum rows, one per grid point per regime (no-turbo first). The
/// regime field of each grid entry is ignored.
std::vector<QuorumRow> quorum_table(const std::vector<fluid::FluidParams>& grid, double phi,
                                    std::size_t horizon);

}  // namespace peerturbo::metrics
