#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "peerturbo/fluid.hpp"
#include "peerturbo/metrics.hpp"
#include "peerturbo/mc_sim.hpp"
#include "peerturbo/survival.hpp"

namespace peerturbo::csv {

inline constexpr std::string_view kSurvivalHeader =
    "mode,source_policy,peer_rule,m,k,alpha,p1,p2,q,trials,seed,step,dim,fraction,stderr";
inline constexpr std::string_view kQuorumHeader =
    "mode,source_policy,peer_rule,m,k,alpha,p1,p2,phi,reached,steps,seconds";
inline constexpr std::string_view kTrialQuorumHeader =
    "mode,source_policy,peer_rule,m,k,alpha,p1,p2,q,trials,seed,trial,phi,reached,steps,seconds";
inline constexpr std::string_view kDiffHeader = "m,k,alpha,p1,p2,step,dim,delta";

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 12 significant digits, shortest form ("%.12g").
std::string format_number(double x);

/// Simulation settings carried by Monte Carlo rows; absent for fluid rows.
struct McLabel {
  mc::SourcePolicy source_policy = mc::SourcePolicy::bernoulli_fluid;
  mc::PeerRule peer_rule = mc::PeerRule::conservative;
  unsigned q = 256;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
};

struct RunLabel {
  fluid::FluidParams params;
  std::optional<McLabel> mc;

  static RunLabel of(const mc::McConfig& cfg);
};

/// Long-form rows ordered by step, then dim. `stderr_F` is written only for
/// Monte Carlo labels.
void write_survival(std::ostream& out, const RunLabel& label, const Surface& fraction,
                    const Surface* stderr_F = nullptr);

void write_quorum(std::ostream& out, const std::vector<std::pair<RunLabel, metrics::QuorumResult>>& rows);

/// One row per Monte Carlo trial, in trial order.
void write_trial_quorum(std::ostream& out, const RunLabel& label,
                        const std::vector<metrics::QuorumResult>& per_trial);

void write_diff(std::ostream& out, const fluid::FluidParams& params, const Surface& delta);

/// A survival CSV read back into memory.
struct SurvivalTable {
  std::string mode;
  std::size_t m = 0;
  std::size_t k = 0;
  double alpha = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  Surface fraction;
};

/// Parses a survival CSV. Requires the exact header, one parameter block, and
/// every (step, dim) cell exactly once. Throws CsvError otherwise.
SurvivalTable read_survival(std::istream& in, std::string_view source_name = "<input>");

struct DiffRow {
  std::size_t step;
  std::size_t dim;
  double delta;
};

/// Parses a diff CSV. Throws CsvError on a header or field mismatch.
std::vector<DiffRow> read_diff(std::istream& in);

std::vector<std::string> split_line(std::string_view line);

}  // namespace peerturbo::csv
