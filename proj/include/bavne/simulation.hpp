#pragma once

#include <atomic>
#include <map>
#include <optional>
#include <queue>
#include <thread>
#include <vector>

#include "bavne/baselines.hpp"
#include "bavne/embedding.hpp"
#include "bavne/metrics.hpp"
#include "bavne/topology.hpp"

namespace bavne {

enum class Algorithm { BaVne, VnePso, McVnm, LidVne, MpVne };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::BaVne: return "ba-vne";
    case Algorithm::VnePso: return "vne-pso";
    case Algorithm::McVnm: return "mc-vnm";
    case Algorithm::LidVne: return "lid-vne";
    case Algorithm::MpVne: return "mp-vne";
  }
  return "unknown";
}

inline std::optional<Algorithm> parse_algorithm(const std::string& s) {
  if (s == "ba-vne") return Algorithm::BaVne;
  if (s == "vne-pso") return Algorithm::VnePso;
  if (s == "mc-vnm") return Algorithm::McVnm;
  if (s == "lid-vne") return Algorithm::LidVne;
  if (s == "mp-vne") return Algorithm::MpVne;
  return std::nullopt;
}

struct SweepGrid {
  std::vector<int> node_counts{2, 4, 6, 8, 10, 12};
  std::vector<Algorithm> algorithms{Algorithm::BaVne, Algorithm::VnePso, Algorithm::McVnm,
                                    Algorithm::LidVne, Algorithm::MpVne};
  int seeds = 10;
};

struct SimulationConfig {
  GeneratorConfig substrate;
  VnrConfig vnr;
  double arrival_rate = 0.04;  // expected arrivals per time unit
  double horizon = 10000;
  Algorithm algorithm = Algorithm::BaVne;
  PsoParams pso;
  ThresholdOptions threshold;
  MpVneWeights mp_weights;
  std::uint64_t seed = 1;
  bool trace_fitness = false;
  std::optional<SweepGrid> sweep;
};

namespace detail {
// stream tags for derived seeds
constexpr std::uint64_t kNetStream = 0x6e6574;   // substrate generation
constexpr std::uint64_t kArrStream = 0x617272;   // arrival process
constexpr std::uint64_t kPsoStream = 0x70736f;   // per-arrival optimizer
constexpr std::uint64_t kLidStream = 0x6c6964;   // per-arrival random baseline
}  // namespace detail

// ---------------------------------------------------------------------------
// Poisson arrival schedule: exponential inter-arrival times at the configured
// rate, truncated at the horizon; each arrival carries a fresh VNR whose
// lifetime is exponential with the configured mean.
// ---------------------------------------------------------------------------
inline std::vector<VirtualNetworkRequest> schedule_arrivals(const SimulationConfig& cfg,
                                                            std::uint64_t seed) {
  if (cfg.arrival_rate <= 0) throw ConfigError("arrival_rate must be positive");
  if (cfg.horizon < 0) throw ConfigError("horizon must be nonnegative");
  VnrConfig vnr_cfg = cfg.vnr;
  vnr_cfg.substrate_domains = cfg.substrate.domains;

  Rng rng(seed);
  std::vector<VirtualNetworkRequest> arrivals;
  double t = 0;
  for (int i = 0;; ++i) {
    t += rng.exponential(1.0 / cfg.arrival_rate);
    if (t > cfg.horizon) break;
    arrivals.push_back(
        generate_vnr(vnr_cfg, mix_seed(seed, 0x1000 + static_cast<std::uint64_t>(i)), t, i));
  }
  return arrivals;
}

struct EventRecord {
  double time = 0;
  char kind = 'A';  // 'A' arrival, 'D' departure
  int vnr_id = -1;
  bool accepted = false;
  RejectReason reason = RejectReason::None;
  double cost = 0;
  double delay = 0;
  int vnr_nodes = 0;
  int vnr_links = 0;
  double utilization_after = 0;
  long long cum_accepted = 0;
  long long cum_total = 0;
};

struct SimulationReport {
  SimulationConfig config;
  int substrate_nodes = 0;
  int substrate_links = 0;
  std::vector<double> domain_initial_mean_bw;
  std::vector<EventRecord> events;
  std::vector<EmbeddingResult> results;  // index == vnr id

  long long accepted = 0;
  long long total = 0;
  std::optional<double> acceptance_rate;
  double final_utilization = 0;
  double time_weighted_utilization = 0;
  std::optional<double> mean_cost;
  std::optional<double> mean_delay;
  double total_cost = 0;
  std::map<DomainId, double> avg_selected_bandwidth;
  long long threshold_breaches = 0;
  bool conservation_ok = false;
};

inline EmbeddingResult dispatch_embedding(SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
                                          const SimulationConfig& cfg) {
  PsoParams pso = cfg.pso;
  pso.seed = mix_seed(mix_seed(cfg.seed, detail::kPsoStream), static_cast<std::uint64_t>(vnr.id));
  switch (cfg.algorithm) {
    case Algorithm::BaVne:
      return embed_vnr(net, vnr, pso, cfg.threshold, cfg.trace_fitness);
    case Algorithm::VnePso:
      return embed_vne_pso(net, vnr, pso, cfg.trace_fitness);
    case Algorithm::McVnm:
      return embed_mc_vnm(net, vnr);
    case Algorithm::LidVne:
      return embed_lid_vne(
          net, vnr,
          mix_seed(mix_seed(cfg.seed, detail::kLidStream), static_cast<std::uint64_t>(vnr.id)));
    case Algorithm::MpVne:
      return embed_mp_vne(net, vnr, pso, cfg.mp_weights, cfg.trace_fitness);
  }
  throw ConfigError("unknown algorithm");
}

// ---------------------------------------------------------------------------
// Event loop. Arrival embeds and, on success, holds resources until the
// departure at arrival + lifetime; departures release. On a shared timestamp
// departures run before arrivals, same-kind ties break by id. All departures
// are processed, including those past the horizon, so the run ends with the
// ledger back at capacity (audited into the report).
// ---------------------------------------------------------------------------
inline SimulationReport run(const SimulationConfig& cfg) {
  SimulationReport report;
  report.config = cfg;

  SubstrateNetwork net = generate_substrate(cfg.substrate, mix_seed(cfg.seed, detail::kNetStream));
  report.substrate_nodes = static_cast<int>(net.nodes.size());
  report.substrate_links = static_cast<int>(net.links.size());
  {
    std::vector<std::vector<double>> bws(static_cast<std::size_t>(net.domain_count));
    for (const auto& l : net.links)
      if (l.kind == LinkKind::Intra) bws[l.domain].push_back(l.bw_capacity);
    for (const auto& v : bws)
      report.domain_initial_mean_bw.push_back(domain_average_bandwidth(v, false));
  }

  auto arrivals = schedule_arrivals(cfg, mix_seed(cfg.seed, detail::kArrStream));
  MetricsAccumulator acc(static_cast<int>(net.links.size()));

  using Departure = std::pair<double, int>;  // (time, vnr id), min-first
  std::priority_queue<Departure, std::vector<Departure>, std::greater<>> departures;

  double util_integral = 0, last_time = 0, last_util = 0;
  auto advance_to = [&](double t) {
    double upto = std::min(t, cfg.horizon);
    if (upto > last_time) util_integral += last_util * (upto - last_time);
    last_time = std::max(last_time, upto);
  };

  std::size_t next_arrival = 0;
  while (next_arrival < arrivals.size() || !departures.empty()) {
    bool take_departure =
        !departures.empty() &&
        (next_arrival >= arrivals.size() ||
         departures.top().first <= arrivals[next_arrival].arrival_time);
    EventRecord ev;
    if (take_departure) {
      auto [t, id] = departures.top();
      departures.pop();
      advance_to(t);
      release(net, report.results[id]);
      acc.on_released(report.results[id]);
      ev.time = t;
      ev.kind = 'D';
      ev.vnr_id = id;
    } else {
      const auto& vnr = arrivals[next_arrival++];
      advance_to(vnr.arrival_time);
      EmbeddingResult result = dispatch_embedding(net, vnr, cfg);
      acc.on_embedded(result);
      if (result.accepted) departures.emplace(vnr.arrival_time + vnr.lifetime, vnr.id);
      ev.time = vnr.arrival_time;
      ev.kind = 'A';
      ev.vnr_id = vnr.id;
      ev.accepted = result.accepted;
      ev.reason = result.reason;
      ev.cost = result.cost;
      ev.delay = result.total_delay;
      ev.vnr_nodes = static_cast<int>(vnr.nodes.size());
      ev.vnr_links = static_cast<int>(vnr.links.size());
      report.results.push_back(std::move(result));
    }
    last_util = acc.link_utilization();
    ev.utilization_after = last_util;
    ev.cum_accepted = acc.accepted_count();
    ev.cum_total = acc.total_count();
    report.events.push_back(ev);
  }
  advance_to(cfg.horizon);

  report.accepted = acc.accepted_count();
  report.total = acc.total_count();
  report.acceptance_rate = acc.acceptance_rate();
  report.final_utilization = acc.link_utilization();
  report.time_weighted_utilization = cfg.horizon > 0 ? util_integral / cfg.horizon : 0;
  if (acc.accepted_count() > 0) {
    report.mean_cost = acc.average_cost();
    report.mean_delay = acc.average_embedding_delay();
  }
  report.total_cost = acc.total_cost();
  for (const auto& [d, samples] : acc.selected_bandwidth_samples())
    if (!samples.empty()) report.avg_selected_bandwidth[d] = acc.average_selected_bandwidth(d);
  report.threshold_breaches = acc.threshold_breaches();

  report.conservation_ok = net.active_embeddings.empty();
  for (const auto& n : net.nodes)
    if (n.cpu_residual != n.cpu_capacity) report.conservation_ok = false;
  for (const auto& l : net.links)
    if (l.bw_residual != l.bw_capacity) report.conservation_ok = false;
  return report;
}

// ---------------------------------------------------------------------------
// Sweep: one run per (node count, algorithm, seed index). Paired seeds: at a
// given seed index every algorithm sees the same substrate and, per grid
// point, the same VNR stream. Cells are independent, so they may be computed
// on worker threads without affecting the results.
// ---------------------------------------------------------------------------

struct SweepCell {
  int node_count = 0;
  Algorithm algorithm = Algorithm::BaVne;
  int seed_index = 0;
  SimulationReport report;
};

inline SimulationConfig sweep_cell_config(const SimulationConfig& base, int node_count,
                                          Algorithm algorithm, int seed_index) {
  SimulationConfig cfg = base;
  cfg.sweep.reset();
  cfg.vnr.node_count = node_count;
  cfg.algorithm = algorithm;
  cfg.seed = mix_seed(base.seed, 0xce110000ULL + static_cast<std::uint64_t>(seed_index));
  return cfg;
}

inline std::vector<SweepCell> sweep(const SimulationConfig& base, unsigned threads = 0) {
  if (!base.sweep) throw ConfigError("sweep grid missing from config");
  const SweepGrid& grid = *base.sweep;
  if (grid.node_counts.empty() || grid.algorithms.empty() || grid.seeds < 1)
    throw ConfigError("sweep grid must be non-empty");

  std::vector<SweepCell> cells;
  for (int g : grid.node_counts)
    for (Algorithm a : grid.algorithms)
      for (int s = 0; s < grid.seeds; ++s) cells.push_back({g, a, s, {}});

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= cells.size()) return;
      auto& c = cells[i];
      c.report = run(sweep_cell_config(base, c.node_count, c.algorithm, c.seed_index));
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return cells;
}

}  // namespace bavne
