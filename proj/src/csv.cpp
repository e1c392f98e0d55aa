#include "peerturbo/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include <fmt/format.h>

namespace peerturbo::csv {

std::string format_number(double x) { return fmt::format("{:.12g}", x); }

RunLabel RunLabel::of(const mc::McConfig& cfg) {
  return {cfg.fluid, McLabel{cfg.source_policy, cfg.peer_rule, cfg.q, cfg.trials, cfg.seed}};
}

namespace {

std::string param_block(const fluid::FluidParams& p) {
  return fmt::format("{},{},{},{},{}", p.m, p.k, format_number(p.alpha), format_number(p.p1),
                     format_number(p.p2));
}

std::string label_prefix(const RunLabel& label) {
  std::string policy, rule;
  if (label.mc) {
    policy = mc::to_string(label.mc->source_policy);
    rule = mc::to_string(label.mc->peer_rule);
  }
  return fmt::format("{},{},{},{}", fluid::to_string(label.params.regime), policy, rule,
                     param_block(label.params));
}

template <class T>
T parse_field(const std::string& text, std::string_view column, std::size_t line_no) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw CsvError(fmt::format("line {}: bad {} value '{}'", line_no, column, text));
  }
  return value;
}

double parse_double(const std::string& text, std::string_view column, std::size_t line_no) {
  // from_chars for double is unavailable in older libstdc++ releases.
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw CsvError(fmt::format("line {}: bad {} value '{}'", line_no, column, text));
}

void check_header(std::istream& in, std::string_view expected, std::string_view source_name) {
  std::string header;
  if (!std::getline(in, header)) throw CsvError(fmt::format("{}: empty file", source_name));
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header != expected) {
    throw CsvError(fmt::format("{}: unexpected header '{}'", source_name, header));
  }
}

}  // namespace

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void write_survival(std::ostream& out, const RunLabel& label, const Surface& fraction,
                    const Surface* stderr_F) {
  if (stderr_F && !stderr_F->same_shape(fraction)) {
    throw std::invalid_argument("stderr surface shape mismatch");
  }
  const std::string prefix = label_prefix(label);
  std::string mc_cols = ",,";
  if (label.mc) mc_cols = fmt::format("{},{},{}", label.mc->q, label.mc->trials, label.mc->seed);

  out << kSurvivalHeader << '\n';
  for (std::size_t s = 0; s <= fraction.horizon(); ++s) {
    for (std::size_t i = 0; i <= fraction.k(); ++i) {
      std::string err;
      if (label.mc) err = format_number(stderr_F ? stderr_F->at(i, s) : 0.0);
      out << prefix << ',' << mc_cols << ',' << s << ',' << i << ','
          << format_number(fraction.at(i, s)) << ',' << err << '\n';
    }
  }
}

void write_quorum(std::ostream& out,
                  const std::vector<std::pair<RunLabel, metrics::QuorumResult>>& rows) {
  out << kQuorumHeader << '\n';
  for (const auto& [label, q] : rows) {
    out << label_prefix(label) << ',' << format_number(q.phi) << ','
        << (q.reached() ? "true" : "false") << ',';
    if (q.reached()) out << *q.steps << ',' << format_number(*q.seconds);
    else out << ',';
    out << '\n';
  }
}

void write_trial_quorum(std::ostream& out, const RunLabel& label,
                        const std::vector<metrics::QuorumResult>& per_trial) {
  if (!label.mc) throw std::invalid_argument("per-trial quorum rows need a Monte Carlo label");
  const std::string prefix = fmt::format("{},{},{},{}", label_prefix(label), label.mc->q,
                                         label.mc->trials, label.mc->seed);
  out << kTrialQuorumHeader << '\n';
  for (std::size_t t = 0; t < per_trial.size(); ++t) {
    const auto& q = per_trial[t];
    out << prefix << ',' << t << ',' << format_number(q.phi) << ','
        << (q.reached() ? "true" : "false") << ',';
    if (q.reached()) out << *q.steps << ',' << format_number(*q.seconds);
    else out << ',';
    out << '\n';
  }
}

void write_diff(std::ostream& out, const fluid::FluidParams& params, const Surface& delta) {
  const std::string block = param_block(params);
  out << kDiffHeader << '\n';
  for (std::size_t s = 0; s <= delta.horizon(); ++s) {
    for (std::size_t i = 0; i <= delta.k(); ++i) {
      out << block << ',' << s << ',' << i << ',' << format_number(delta.at(i, s)) << '\n';
    }
  }
}

SurvivalTable read_survival(std::istream& in, std::string_view source_name) {
  check_header(in, kSurvivalHeader, source_name);

  struct Cell {
    std::size_t step, dim;
    double fraction;
  };
  std::vector<Cell> cells;
  SurvivalTable table;
  std::string first_block;
  std::string line;
  std::size_t line_no = 1;
  std::size_t max_step = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 15) {
      throw CsvError(fmt::format("{}: line {}: expected 15 fields, got {}", source_name, line_no,
                                 f.size()));
    }
    const std::string block = fmt::format("{},{},{},{},{},{}", f[0], f[3], f[4], f[5], f[6], f[7]);
    if (first_block.empty()) {
      first_block = block;
      table.mode = f[0];
      table.m = parse_field<std::size_t>(f[3], "m", line_no);
      table.k = parse_field<std::size_t>(f[4], "k", line_no);
      table.alpha = parse_double(f[5], "alpha", line_no);
      table.p1 = parse_double(f[6], "p1", line_no);
      table.p2 = parse_double(f[7], "p2", line_no);
    } else if (block != first_block) {
      throw CsvError(fmt::format("{}: line {}: parameter block differs from first row",
                                 source_name, line_no));
    }
    Cell c{parse_field<std::size_t>(f[11], "step", line_no),
           parse_field<std::size_t>(f[12], "dim", line_no),
           parse_double(f[13], "fraction", line_no)};
    if (c.dim > table.k) {
      throw CsvError(fmt::format("{}: line {}: dim {} exceeds k", source_name, line_no, c.dim));
    }
    max_step = std::max(max_step, c.step);
    cells.push_back(c);
  }
  if (cells.empty()) throw CsvError(fmt::format("{}: no data rows", source_name));

  table.fraction = Surface(table.k, max_step);
  std::vector<bool> seen((table.k + 1) * (max_step + 1), false);
  for (const auto& c : cells) {
    const std::size_t idx = c.step * (table.k + 1) + c.dim;
    if (seen[idx]) {
      throw CsvError(fmt::format("{}: duplicate cell step={} dim={}", source_name, c.step, c.dim));
    }
    seen[idx] = true;
    table.fraction.at(c.dim, c.step) = c.fraction;
  }
  if (cells.size() != seen.size()) {
    throw CsvError(fmt::format("{}: truncated table ({} of {} cells)", source_name, cells.size(),
                               seen.size()));
  }
  return table;
}

std::vector<DiffRow> read_diff(std::istream& in) {
  check_header(in, kDiffHeader, "<diff>");
  std::vector<DiffRow> rows;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 8) throw CsvError(fmt::format("line {}: expected 8 fields", line_no));
    rows.push_back({parse_field<std::size_t>(f[5], "step", line_no),
                    parse_field<std::size_t>(f[6], "dim", line_no),
                    parse_double(f[7], "delta", line_no)});
  }
  return rows;
}

}  // namespace peerturbo::csv
