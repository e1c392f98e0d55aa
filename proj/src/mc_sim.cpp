#include "peerturbo/mc_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace peerturbo::mc {

std::string_view to_string(SourcePolicy p) {
  return p == SourcePolicy::bernoulli_fluid ? "bernoulli-fluid" : "integer-schedule";
}

std::string_view to_string(PeerRule r) {
  return r == PeerRule::conservative ? "conservative" : "rlnc-exact";
}

SourcePolicy parse_source_policy(std::string_view s) {
  if (s == "bernoulli-fluid" || s == "bernoulli_fluid") return SourcePolicy::bernoulli_fluid;
  if (s == "integer-schedule" || s == "integer_schedule") return SourcePolicy::integer_schedule;
  throw std::invalid_argument("unknown source policy '" + std::string(s) + "'");
}

PeerRule parse_peer_rule(std::string_view s) {
  if (s == "conservative") return PeerRule::conservative;
  if (s == "rlnc-exact" || s == "rlnc_exact") return PeerRule::rlnc_exact;
  throw std::invalid_argument("unknown peer rule '" + std::string(s) + "'");
}

void McConfig::validate() const {
  fluid.validate();
  if (q != 2 && q != 256) throw std::invalid_argument("q must be 2 or 256");
  if (l < 1) throw std::invalid_argument("l must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (fluid.k > 0xFFFF) throw std::invalid_argument("k must fit in 16 bits");
}

DeliveryCounters& DeliveryCounters::operator+=(const DeliveryCounters& o) {
  source_deliveries += o.source_deliveries;
  peer_deliveries += o.peer_deliveries;
  from_higher += o.from_higher;
  from_higher_non_innovative += o.from_higher_non_innovative;
  return *this;
}

std::vector<NodeState> make_nodes(const McConfig& cfg) {
  const auto& field = gf::Field::of(cfg.q);
  std::vector<NodeState> nodes;
  nodes.reserve(cfg.fluid.m);
  for (std::size_t j = 0; j < cfg.fluid.m; ++j) {
    nodes.push_back(NodeState{rlnc::Decoder(field, cfg.fluid.k, cfg.l), 0});
  }
  return nodes;
}

namespace {

struct Delivery {
  std::size_t receiver;
  rlnc::CodedShard shard;
  bool from_peer;
  bool from_higher;
};

RandomStream stream(const RoundKey& key, std::uint64_t node, Channel channel) {
  return RandomStream::derive(key.seed, {key.trial, key.round, node, channel});
}

}  // namespace

void run_round(std::vector<NodeState>& nodes, const rlnc::Payload& payload, const McConfig& cfg,
               const RoundKey& key, DeliveryCounters* counters) {
  const auto& field = gf::Field::of(cfg.q);
  const std::size_t m = nodes.size();
  const auto& fp = cfg.fluid;

  std::vector<std::size_t> start_rank(m);
  for (std::size_t j = 0; j < m; ++j) start_rank[j] = nodes[j].decoder.rank();
  auto complete_at_start = [&](std::size_t j) { return start_rank[j] == fp.k; };

  DeliveryCounters local;
  std::vector<Delivery> pending;

  // Source phase. Full-rank receivers still count the reception but skip
  // building a shard that could never be innovative.
  if (cfg.source_policy == SourcePolicy::bernoulli_fluid) {
    const double c1 = fp.source_coefficient();
    for (std::size_t j = 0; j < m; ++j) {
      auto rng = stream(key, j, Channel::source);
      if (!rng.bernoulli(c1)) continue;
      ++nodes[j].receptions;
      ++local.source_deliveries;
      if (complete_at_start(j)) continue;
      auto coeff_rng = stream(key, j, Channel::source_coeffs);
      pending.push_back({j, rlnc::make_source_shard(field, payload, coeff_rng), false, false});
    }
  } else {
    const auto emitted = static_cast<std::uint64_t>(std::llround(fp.alpha));
    auto pick = stream(key, 0, Channel::source);
    auto loss = stream(key, 0, Channel::source_loss);
    for (std::uint64_t t = 0; t < emitted; ++t) {
      const auto j = static_cast<std::size_t>(pick.below(m));
      if (!loss.bernoulli(fp.p1)) continue;
      ++nodes[j].receptions;
      ++local.source_deliveries;
      if (complete_at_start(j)) continue;
      auto coeff_rng = stream(key, t, Channel::source_coeffs);
      pending.push_back({j, rlnc::make_source_shard(field, payload, coeff_rng), false, false});
    }
  }

  // Peer phase: one pull per node from a uniformly random other node.
  if (fp.regime == fluid::Regime::peer_turbo && m >= 2) {
    for (std::size_t j = 0; j < m; ++j) {
      auto select = stream(key, j, Channel::peer_select);
      auto donor = static_cast<std::size_t>(select.below(m - 1));
      if (donor >= j) ++donor;
      auto loss = stream(key, j, Channel::peer_loss);
      if (!loss.bernoulli(fp.p2)) continue;
      if (start_rank[donor] == 0) continue;

      ++nodes[j].receptions;
      const bool higher = start_rank[donor] > start_rank[j];
      if (cfg.peer_rule == PeerRule::conservative && !higher) continue;
      if (complete_at_start(j)) continue;

      // Nothing has been absorbed yet, so the donor is still in its
      // start-of-round state.
      auto coeff_rng = stream(key, j, Channel::peer_coeffs);
      pending.push_back({j, nodes[donor].decoder.recode(coeff_rng), true, higher});
    }
  }

  for (const auto& d : pending) {
    const bool innovative = nodes[d.receiver].decoder.absorb(d.shard);
    if (!d.from_peer) continue;
    ++local.peer_deliveries;
    if (d.from_higher) {
      ++local.from_higher;
      if (!innovative) ++local.from_higher_non_innovative;
    }
  }

  if (counters) *counters += local;
}

TrialResult run_trial(const McConfig& cfg, std::uint64_t trial_index) {
  cfg.validate();
  const auto& field = gf::Field::of(cfg.q);
  const std::size_t m = cfg.fluid.m;

  auto payload_rng = RandomStream::derive(cfg.seed, {trial_index, 0, 0, Channel::payload});
  const auto payload = rlnc::Payload::random(field, cfg.fluid.k, cfg.l, payload_rng);

  auto nodes = make_nodes(cfg);
  TrialResult result{RankMatrix(m, cfg.horizon), {}, {}};
  for (std::size_t s = 1; s <= cfg.horizon; ++s) {
    run_round(nodes, payload, cfg, RoundKey{cfg.seed, trial_index, s - 1}, &result.counters);
    for (std::size_t j = 0; j < m; ++j) {
      result.ranks.at(j, s) = static_cast<std::uint16_t>(nodes[j].decoder.rank());
    }
  }
  result.receptions.reserve(m);
  for (const auto& n : nodes) result.receptions.push_back(n.receptions);
  return result;
}

std::vector<std::uint64_t> survival_counts(const RankMatrix& ranks, std::size_t k) {
  std::vector<std::uint64_t> out((k + 1) * (ranks.horizon() + 1), 0);
  std::vector<std::uint64_t> hist(k + 1);
  for (std::size_t s = 0; s <= ranks.horizon(); ++s) {
    std::fill(hist.begin(), hist.end(), 0);
    for (std::size_t j = 0; j < ranks.m(); ++j) ++hist[std::min<std::size_t>(ranks.at(j, s), k)];
    std::uint64_t at_least = 0;
    for (std::size_t i = k + 1; i-- > 0;) {
      at_least += hist[i];
      out[s * (k + 1) + i] = at_least;
    }
  }
  return out;
}

EnsembleSurvival run_ensemble(const McConfig& cfg) {
  cfg.validate();
  const std::size_t k = cfg.fluid.k;
  const std::size_t cells = (k + 1) * (cfg.horizon + 1);

  std::vector<std::uint64_t> sum(cells, 0);
  std::vector<std::uint64_t> sum_sq(cells, 0);
  DeliveryCounters counters;
  std::vector<std::vector<std::uint32_t>> decoded(cfg.trials);
  std::mutex merge_mutex;
  std::atomic<std::uint64_t> next{0};

  auto worker = [&] {
    std::vector<std::uint64_t> my_sum(cells, 0);
    std::vector<std::uint64_t> my_sq(cells, 0);
    DeliveryCounters my_counters;
    for (std::uint64_t t = next++; t < cfg.trials; t = next++) {
      const auto trial = run_trial(cfg, t);
      const auto counts = survival_counts(trial.ranks, k);
      for (std::size_t c = 0; c < cells; ++c) {
        my_sum[c] += counts[c];
        my_sq[c] += counts[c] * counts[c];
      }
      auto& full = decoded[t];
      full.resize(cfg.horizon + 1);
      for (std::size_t s = 0; s <= cfg.horizon; ++s) {
        full[s] = static_cast<std::uint32_t>(counts[s * (k + 1) + k]);
      }
      my_counters += trial.counters;
    }
    std::lock_guard lock(merge_mutex);
    for (std::size_t c = 0; c < cells; ++c) {
      sum[c] += my_sum[c];
      sum_sq[c] += my_sq[c];
    }
    counters += my_counters;
  };

  unsigned threads = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::min<std::size_t>(cfg.trials, 256)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  }

  EnsembleSurvival out{Surface(k, cfg.horizon), Surface(k, cfg.horizon), cfg.trials, counters,
                       std::move(decoded)};
  const double T = static_cast<double>(cfg.trials);
  const double m = static_cast<double>(cfg.fluid.m);
  for (std::size_t s = 0; s <= cfg.horizon; ++s) {
    for (std::size_t i = 0; i <= k; ++i) {
      const std::size_t c = s * (k + 1) + i;
      const double s1 = static_cast<double>(sum[c]);
      const double s2 = static_cast<double>(sum_sq[c]);
      out.mean_F.at(i, s) = s1 / (T * m);
      if (cfg.trials > 1) {
        const double var = std::max(0.0, (s2 - s1 * s1 / T) / ((T - 1.0) * m * m));
        out.stderr_F.at(i, s) = std::sqrt(var / T);
      }
    }
  }
  return out;
}

}  // namespace peerturbo::mc
