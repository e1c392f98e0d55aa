#include "peerturbo/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "peerturbo/csv.hpp"
#include "peerturbo/fluid.hpp"
#include "peerturbo/mc_sim.hpp"
#include "peerturbo/metrics.hpp"

namespace peerturbo::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string mode = "no-turbo";
  std::size_t m = 1300;
  std::size_t k = 32;
  double alpha = 50.0;
  double p1 = 0.9;
  double p2 = 0.9;
  double dt = 1.0;
  std::size_t horizon = 2000;
  double phi = 0.8;
  unsigned q = 256;
  std::size_t l = 32;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::string source_policy = "bernoulli-fluid";
  std::string peer_rule = "conservative";
  std::vector<double> alpha_list;
  std::vector<std::size_t> m_list;
  std::string a_csv;
  std::string b_csv;
  std::string out = ".";
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const CLI::Validator kPhiRange(
    [](std::string& text) -> std::string {
      try {
        const double v = std::stod(text);
        if (v > 0.0 && v <= 1.0) return {};
      } catch (const std::exception&) {
      }
      return "value " + text + " not in (0, 1]";
    },
    "(0,1]", "PHI");

const CLI::Validator kPositive(
    [](std::string& text) -> std::string {
      try {
        const double v = std::stod(text);
        if (v > 0.0 && std::isfinite(v)) return {};
      } catch (const std::exception&) {
      }
      return "value " + text + " must be > 0";
    },
    "POSITIVE", "POSITIVE");

void add_model_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--m", o.m, "target node count")->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  cmd->add_option("--k", o.k, "degrees of freedom needed to decode")->check(CLI::Range(1, 65535));
  cmd->add_option("--alpha", o.alpha, "source shards per round")->check(kPositive);
  cmd->add_option("--p1", o.p1, "source link success probability")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--p2", o.p2, "peer link success probability")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--dt", o.dt, "seconds per round")->check(kPositive);
  cmd->add_option("--horizon", o.horizon, "rounds to simulate")->check(CLI::Range(std::size_t{0}, std::size_t{10000000}));
  cmd->add_option("--phi", o.phi, "quorum fraction")->check(kPhiRange);
  cmd->add_option("--out", o.out, "output directory");
}

void add_mode_flag(CLI::App* cmd, Options& o) {
  cmd->add_option("--mode", o.mode, "no-turbo or peer-turbo")
      ->check(CLI::IsMember({"no-turbo", "peer-turbo"}));
}

void add_mc_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--q", o.q, "field size")->check(CLI::IsMember({2u, 256u}));
  cmd->add_option("--l", o.l, "symbols per shard")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  cmd->add_option("--trials", o.trials, "Monte Carlo trials")->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  cmd->add_option("--seed", o.seed, "root random seed");
  cmd->add_option("--source-policy", o.source_policy, "bernoulli-fluid or integer-schedule")
      ->check(CLI::IsMember({"bernoulli-fluid", "integer-schedule"}));
  cmd->add_option("--peer-rule", o.peer_rule, "conservative or rlnc-exact")
      ->check(CLI::IsMember({"conservative", "rlnc-exact"}));
}

fluid::FluidParams fluid_params(const Options& o) {
  fluid::FluidParams p;
  p.m = o.m;
  p.k = o.k;
  p.alpha = o.alpha;
  p.p1 = o.p1;
  p.p2 = o.p2;
  p.dt = o.dt;
  p.regime = fluid::parse_regime(o.mode);
  p.validate();
  return p;
}

mc::McConfig mc_config(const Options& o) {
  mc::McConfig c;
  c.fluid = fluid_params(o);
  c.q = o.q;
  c.l = o.l;
  c.trials = o.trials;
  c.seed = o.seed;
  c.source_policy = mc::parse_source_policy(o.source_policy);
  c.peer_rule = mc::parse_peer_rule(o.peer_rule);
  c.horizon = o.horizon;
  c.validate();
  return c;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Resolved parameters plus the files one invocation produced.
class Manifest {
 public:
  Manifest(std::string command) : command_(std::move(command)), started_(utc_now()) {}

  void set(std::string key, std::string value) { entries_.emplace_back(std::move(key), std::move(value)); }
  void add_output(const fs::path& p) { outputs_.push_back(p.string()); }

  void write(const fs::path& path, const std::vector<std::string>& argv_canonical) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << "tool: " << kToolName << '\n';
    f << "tool_version: " << kToolVersion << '\n';
    f << "command: " << command_ << '\n';
    f << "command_line: " << join(argv_canonical, " ") << '\n';
    for (const auto& [k, v] : entries_) f << k << ": " << v << '\n';
    for (const auto& o : outputs_) f << "output: " << o << '\n';
    f << "started_at: " << started_ << '\n';
    f << "finished_at: " << utc_now() << '\n';
  }

 private:
  std::string command_;
  std::string started_;
  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<std::string> outputs_;
};

void record_model(Manifest& man, std::vector<std::string>& argv, const Options& o, bool with_mode) {
  const auto num = [](double x) { return csv::format_number(x); };
  auto put = [&](const std::string& key, const std::string& value) {
    man.set(key, value);
    argv.push_back("--" + key);
    argv.push_back(value);
  };
  if (with_mode) put("mode", o.mode);
  put("m", std::to_string(o.m));
  put("k", std::to_string(o.k));
  put("alpha", num(o.alpha));
  put("p1", num(o.p1));
  put("p2", num(o.p2));
  put("dt", num(o.dt));
  put("horizon", std::to_string(o.horizon));
  put("phi", num(o.phi));
}

void record_mc(Manifest& man, std::vector<std::string>& argv, const Options& o) {
  auto put = [&](const std::string& key, const std::string& value) {
    man.set(key, value);
    argv.push_back("--" + key);
    argv.push_back(value);
  };
  put("q", std::to_string(o.q));
  put("l", std::to_string(o.l));
  put("trials", std::to_string(o.trials));
  put("seed", std::to_string(o.seed));
  put("source-policy", o.source_policy);
  put("peer-rule", o.peer_rule);
}

fs::path prepare_out(const Options& o) {
  fs::path dir(o.out);
  fs::create_directories(dir);
  return dir;
}

template <class Fn>
void write_file(const fs::path& path, Fn&& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  body(f);
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

void finish(std::ostream& out, Manifest& man, const fs::path& manifest_path,
            const std::vector<std::string>& argv, const std::vector<fs::path>& files) {
  for (const auto& p : files) man.add_output(p);
  man.add_output(manifest_path);
  man.write(manifest_path, argv);
  for (const auto& p : files) out << p.string() << '\n';
  out << manifest_path.string() << '\n';
}

int cmd_fluid(const Options& o, std::ostream& out) {
  const auto params = fluid_params(o);
  const auto dir = prepare_out(o);
  Manifest man("fluid");
  std::vector<std::string> argv{std::string(kToolName), "fluid"};
  record_model(man, argv, o, true);

  const auto surface = Surface::from_trajectory(fluid::run(params, o.horizon));
  const auto quorum = metrics::quorum_time(surface, params.k, o.phi, params.dt);
  const csv::RunLabel label{params, std::nullopt};

  const std::string stem = "fluid_" + o.mode;
  const auto survival_path = dir / (stem + "_survival.csv");
  const auto quorum_path = dir / (stem + "_quorum.csv");
  write_file(survival_path, [&](std::ostream& f) { csv::write_survival(f, label, surface); });
  write_file(quorum_path, [&](std::ostream& f) { csv::write_quorum(f, {{label, quorum}}); });
  finish(out, man, dir / (stem + "_manifest.txt"), argv, {survival_path, quorum_path});
  return 0;
}

int cmd_mc(const Options& o, std::ostream& out) {
  const auto cfg = mc_config(o);
  const auto dir = prepare_out(o);
  Manifest man("mc");
  std::vector<std::string> argv{std::string(kToolName), "mc"};
  record_model(man, argv, o, true);
  record_mc(man, argv, o);

  const auto ensemble = mc::run_ensemble(cfg);
  const auto quorum = metrics::quorum_time(ensemble.mean_F, cfg.fluid.k, o.phi, cfg.fluid.dt);
  const auto label = csv::RunLabel::of(cfg);

  const std::string stem = "mc_" + o.mode;
  const auto survival_path = dir / (stem + "_survival.csv");
  const auto quorum_path = dir / (stem + "_quorum.csv");
  write_file(survival_path, [&](std::ostream& f) {
    csv::write_survival(f, label, ensemble.mean_F, &ensemble.stderr_F);
  });
  write_file(quorum_path, [&](std::ostream& f) { csv::write_quorum(f, {{label, quorum}}); });
  std::vector<metrics::QuorumResult> per_trial;
  per_trial.reserve(ensemble.decoded.size());
  for (const auto& d : ensemble.decoded) {
    per_trial.push_back(metrics::quorum_from_counts(d, cfg.fluid.m, o.phi, cfg.fluid.dt));
  }
  const auto trial_path = dir / (stem + "_trial_quorum.csv");
  write_file(trial_path, [&](std::ostream& f) { csv::write_trial_quorum(f, label, per_trial); });
  man.set("peer_deliveries", std::to_string(ensemble.counters.peer_deliveries));
  man.set("peer_from_higher", std::to_string(ensemble.counters.from_higher));
  man.set("peer_from_higher_non_innovative",
          std::to_string(ensemble.counters.from_higher_non_innovative));
  finish(out, man, dir / (stem + "_manifest.txt"), argv,
         {survival_path, quorum_path, trial_path});
  return 0;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  if (o.alpha_list.empty() && o.m_list.empty()) {
    throw UsageError("sweep needs --alpha-list and/or --m-list");
  }
  const auto alphas = o.alpha_list.empty() ? std::vector<double>{o.alpha} : o.alpha_list;
  const auto ms = o.m_list.empty() ? std::vector<std::size_t>{o.m} : o.m_list;

  std::vector<fluid::FluidParams> grid;
  for (const auto m : ms) {
    for (const auto a : alphas) {
      Options point = o;
      point.m = m;
      point.alpha = a;
      grid.push_back(fluid_params(point));
    }
  }

  const auto dir = prepare_out(o);
  Manifest man("sweep");
  std::vector<std::string> argv{std::string(kToolName), "sweep"};
  record_model(man, argv, o, false);
  std::vector<std::string> alpha_text, m_text;
  for (double a : o.alpha_list) alpha_text.push_back(csv::format_number(a));
  for (auto m : o.m_list) m_text.push_back(std::to_string(m));
  if (!alpha_text.empty()) {
    man.set("alpha-list", join(alpha_text, ","));
    argv.insert(argv.end(), {"--alpha-list", join(alpha_text, ",")});
  }
  if (!m_text.empty()) {
    man.set("m-list", join(m_text, ","));
    argv.insert(argv.end(), {"--m-list", join(m_text, ",")});
  }

  const auto table = metrics::quorum_table(grid, o.phi, o.horizon);
  std::vector<std::pair<csv::RunLabel, metrics::QuorumResult>> rows;
  rows.reserve(table.size());
  for (const auto& r : table) rows.push_back({csv::RunLabel{r.params, std::nullopt}, r.result});

  const auto quorum_path = dir / "sweep_quorum.csv";
  write_file(quorum_path, [&](std::ostream& f) { csv::write_quorum(f, rows); });
  finish(out, man, dir / "sweep_manifest.txt", argv, {quorum_path});
  return 0;
}

csv::SurvivalTable load_survival(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  return csv::read_survival(f, path);
}

int cmd_diff(const Options& o, std::ostream& out) {
  const auto dir = prepare_out(o);
  Manifest man("diff");
  std::vector<std::string> argv{std::string(kToolName), "diff"};

  fluid::FluidParams params;
  Surface delta;
  if (!o.a_csv.empty() || !o.b_csv.empty()) {
    if (o.a_csv.empty() || o.b_csv.empty()) throw UsageError("diff needs both --a and --b");
    const auto a = load_survival(o.a_csv);
    const auto b = load_survival(o.b_csv);
    if (a.k != b.k) {
      throw UsageError(fmt::format("k mismatch: {} has k={}, {} has k={}", o.a_csv, a.k, o.b_csv, b.k));
    }
    if (a.fraction.horizon() != b.fraction.horizon()) {
      throw UsageError(fmt::format("horizon mismatch: {} vs {}", a.fraction.horizon(),
                                   b.fraction.horizon()));
    }
    if (a.m != b.m || a.alpha != b.alpha || a.p1 != b.p1 || a.p2 != b.p2) {
      throw UsageError("parameter mismatch between " + o.a_csv + " and " + o.b_csv);
    }
    params.m = a.m;
    params.k = a.k;
    params.alpha = a.alpha;
    params.p1 = a.p1;
    params.p2 = a.p2;
    delta = metrics::diff_surface(a.fraction, b.fraction);
    man.set("a", o.a_csv);
    man.set("b", o.b_csv);
    argv.insert(argv.end(), {"--a", o.a_csv, "--b", o.b_csv});
  } else {
    record_model(man, argv, o, false);
    Options base = o;
    base.mode = "no-turbo";
    params = fluid_params(base);
    auto turbo = params;
    turbo.regime = fluid::Regime::peer_turbo;
    delta = metrics::diff_surface(fluid::run(params, o.horizon), fluid::run(turbo, o.horizon));
  }

  const auto diff_path = dir / "diff.csv";
  write_file(diff_path, [&](std::ostream& f) { csv::write_diff(f, params, delta); });
  finish(out, man, dir / "diff_manifest.txt", argv, {diff_path});
  return 0;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Degree-of-freedom fluid model and RLNC Monte Carlo for star-topology broadcast",
               std::string(kToolName)};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  auto* fluid_cmd = app.add_subcommand("fluid", "run the fluid recurrence for one parameter point");
  add_mode_flag(fluid_cmd, o);
  add_model_flags(fluid_cmd, o);

  auto* mc_cmd = app.add_subcommand("mc", "run a Monte Carlo ensemble with real RLNC shards");
  add_mode_flag(mc_cmd, o);
  add_model_flags(mc_cmd, o);
  add_mc_flags(mc_cmd, o);

  auto* sweep_cmd = app.add_subcommand("sweep", "fluid quorum table over alpha and/or m grids");
  add_model_flags(sweep_cmd, o);
  sweep_cmd->add_option("--alpha-list", o.alpha_list, "comma-separated alpha values")
      ->delimiter(',')
      ->check(kPositive);
  sweep_cmd->add_option("--m-list", o.m_list, "comma-separated m values")
      ->delimiter(',')
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));

  auto* diff_cmd = app.add_subcommand("diff", "peer-turbo minus no-turbo survival difference");
  add_model_flags(diff_cmd, o);
  diff_cmd->add_option("--a", o.a_csv, "baseline survival CSV");
  diff_cmd->add_option("--b", o.b_csv, "survival CSV to subtract the baseline from");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << kToolName << ": error: " << first_line(e.what()) << '\n';
    return 2;
  }

  try {
    if (fluid_cmd->parsed()) return cmd_fluid(o, out);
    if (mc_cmd->parsed()) return cmd_mc(o, out);
    if (sweep_cmd->parsed()) return cmd_sweep(o, out);
    return cmd_diff(o, out);
  } catch (const UsageError& e) {
    err << kToolName << ": error: " << first_line(e.what()) << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << kToolName << ": error: " << first_line(e.what()) << '\n';
    return 1;
  }
}

}  // namespace peerturbo::cli
