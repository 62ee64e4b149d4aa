// Acceptance suite: one check per criterion, one pass/fail line each.
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bavne/serialize.hpp"
#include "bavne/simulation.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace bavne;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double elapsed_s(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Table II substrate, bandwidth-aware algorithm, light-but-nonempty load.
SimulationConfig table2_config(std::uint64_t seed) {
  SimulationConfig cfg;
  cfg.arrival_rate = 0.25;
  cfg.horizon = 400;
  cfg.vnr.mean_lifetime = 500;
  cfg.pso.swarm_size = 10;
  cfg.pso.max_iterations = 15;
  cfg.trace_fitness = true;
  cfg.seed = seed;
  return cfg;
}

// Loaded sweep config: smaller domains and scarcer bandwidth so the
// acceptance curves genuinely decline across the node-count grid.
SimulationConfig loaded_sweep_config() {
  SimulationConfig cfg;
  cfg.substrate.nodes_per_domain = 15;
  cfg.substrate.intra_bw_min = 300;
  cfg.substrate.intra_bw_max = 900;
  cfg.substrate.inter_bw_min = 300;
  cfg.substrate.inter_bw_max = 900;
  cfg.arrival_rate = 0.5;
  cfg.horizon = 600;
  cfg.vnr.mean_lifetime = 500;
  cfg.pso.swarm_size = 10;
  cfg.pso.max_iterations = 15;
  cfg.seed = 424242;
  return cfg;
}

std::vector<SimulationReport> g_table2_runs;  // shared by criteria 1, 2, 7, 8
bool g_conservation_ok = true;
long long g_runs_seen = 0;

void note_run(const SimulationReport& r) {
  ++g_runs_seen;
  if (!r.conservation_ok) g_conservation_ok = false;
}

// --------------------------------------------------------------------------
void criterion_1_threshold_compliance() {
  auto start = Clock::now();
  long long selected = 0, breaches = 0;
  for (int s = 0; s < 20; ++s) {
    auto r = run(table2_config(1000 + s));
    note_run(r);
    breaches += r.threshold_breaches;
    for (const auto& res : r.results) {
      if (!res.accepted) continue;
      for (const auto& rec : res.selected_links) {
        ++selected;
        if (rec.residual_at_selection < rec.threshold_at_selection) ++breaches;
      }
    }
    g_table2_runs.push_back(std::move(r));
  }
  std::ostringstream d;
  d << selected << " selected intra-domain links across 20 seeded runs, " << breaches
    << " below their domain threshold (" << std::fixed << elapsed_s(start) << "s)";
  report(1, "threshold compliance on every selected link", selected > 0 && breaches == 0, d.str());
}

// --------------------------------------------------------------------------
void criterion_2_domain_means() {
  auto start = Clock::now();
  GeneratorConfig gen;  // Table II
  std::vector<double> domain_sum(4, 0);
  for (int s = 0; s < 30; ++s) {
    auto net = generate_substrate(gen, 5000 + s);
    std::vector<std::vector<double>> bws(4);
    for (const auto& l : net.links)
      if (l.kind == LinkKind::Intra) bws[l.domain].push_back(l.bw_capacity);
    for (int d = 0; d < 4; ++d) domain_sum[d] += domain_average_bandwidth(bws[d], false);
  }
  bool means_ok = true;
  std::ostringstream means;
  for (int d = 0; d < 4; ++d) {
    double mean = domain_sum[d] / 30.0;
    means << (d ? "/" : "") << std::fixed << mean;
    if (mean < 1900 || mean > 2100) means_ok = false;
  }

  long long sampled_pairs = 0, exceeded = 0;
  for (const auto& r : g_table2_runs) {
    for (const auto& [d, avg] : r.avg_selected_bandwidth) {
      ++sampled_pairs;
      if (avg > r.domain_initial_mean_bw[d]) ++exceeded;
    }
  }
  bool selected_ok = sampled_pairs >= 70 && exceeded == sampled_pairs;
  std::ostringstream det;
  det << "30-seed domain means " << means.str() << " (target [1900,2100]); selected-vs-mean "
      << exceeded << "/" << sampled_pairs << " domain-runs strictly above ("
      << elapsed_s(start) << "s)";
  report(2, "experiment-1 statistics", means_ok && selected_ok, det.str());
}

// --------------------------------------------------------------------------
void criterion_3_bandwidth_vs_mpvne() {
  auto start = Clock::now();
  int wins = 0, trials = 0;
  for (int s = 0; s < 20; ++s) {
    SimulationConfig cfg = table2_config(2000 + s);
    cfg.horizon = 300;
    cfg.trace_fitness = false;
    cfg.algorithm = Algorithm::BaVne;
    auto rb = run(cfg);
    cfg.algorithm = Algorithm::MpVne;
    auto rm = run(cfg);
    note_run(rb);
    note_run(rm);
    auto pooled = [](const SimulationReport& r) {
      double sum = 0;
      long long n = 0;
      for (const auto& res : r.results)
        for (const auto& rec : res.selected_links) {
          sum += rec.residual_at_selection;
          ++n;
        }
      return n ? sum / static_cast<double>(n) : -1.0;
    };
    double ba = pooled(rb), mp = pooled(rm);
    if (ba < 0 || mp < 0) continue;
    ++trials;
    if (ba >= mp) ++wins;
  }
  std::ostringstream d;
  d << wins << "/" << trials << " paired runs with mean selected bandwidth >= the multi-objective"
    << " baseline's (need >=90% of 20) (" << std::fixed << elapsed_s(start) << "s)";
  report(3, "experiment-2 direction", trials >= 20 && wins * 10 >= trials * 9, d.str());
}

// --------------------------------------------------------------------------
void criterion_4_premapping_oracle() {
  auto start = Clock::now();
  int optimal = 0, within = 0, trials = 0;
  for (int t = 0; t < 100; ++t) {
    GeneratorConfig gc;
    gc.domains = 2;
    gc.nodes_per_domain = 5;
    gc.boundary_per_domain = 2;
    auto net = generate_substrate(gc, 77000 + t);
    std::vector<AggregatedDomainView> views;
    for (DomainId d = 0; d < 2; ++d) {
      double threshold = domain_thresholds(net)[d];
      views.push_back(aggregate_domain(net, d, select_candidate_nodes(net, d, threshold)));
    }
    std::vector<SubstrateLink> inter;
    for (const auto& l : net.links)
      if (l.kind == LinkKind::Inter) inter.push_back(l);
    auto gcn = build_global_candidate_network(views, inter);

    VnrConfig vc;
    vc.node_count = 2 + t % 2;
    vc.substrate_domains = 2;
    auto vnr = generate_vnr(vc, 1500 + t, 0.0, t);

    CandidateSpace space;
    try {
      space = CandidateSpace::build(gcn, vnr);
    } catch (const NoFeasibleCandidate&) {
      continue;
    }
    std::vector<std::vector<NodeId>> choices(vnr.nodes.size());
    for (std::size_t k = 0; k < vnr.nodes.size(); ++k)
      for (const auto* c : space.feasible[k]) choices[k].push_back(c->node);
    std::vector<Position> all;
    oracle::enumerate_assignments(choices, all);
    double best = kInfinity;
    for (const auto& pos : all)
      best = std::min(best, oracle::independent_premap_fitness(pos, gcn, vnr));
    if (best == kInfinity) continue;

    PsoParams params;
    params.swarm_size = 100;
    params.max_iterations = 200;
    params.seed = 31000 + t;
    ++trials;
    try {
      auto premap = run_premapping(gcn, vnr, params);
      if (premap.fitness <= best * (1 + 1e-9)) ++optimal;
      if (premap.fitness <= best * 1.10 + 1e-9) ++within;
    } catch (const PremappingFailed&) {
    }
  }
  std::ostringstream d;
  d << optimal << "/" << trials << " optimal (need >=80%), " << within
    << "/" << trials << " within 110% (need >=95%) (" << std::fixed << elapsed_s(start) << "s)";
  report(4, "pre-mapping against the exhaustive oracle",
         trials >= 90 && optimal * 10 >= trials * 8 && within * 100 >= trials * 95, d.str());
}

// --------------------------------------------------------------------------
void criterion_5_grid_trends() {
  auto start = Clock::now();
  SimulationConfig base = loaded_sweep_config();
  SweepGrid grid;
  grid.node_counts = {2, 4, 6, 8, 10, 12};
  grid.algorithms = {Algorithm::BaVne, Algorithm::LidVne, Algorithm::VnePso};
  grid.seeds = 10;
  base.sweep = grid;
  auto cells = sweep(base);
  for (const auto& c : cells) note_run(c.report);

  auto cell = [&](Algorithm a, int g, int s) -> const SimulationReport& {
    for (const auto& c : cells)
      if (c.algorithm == a && c.node_count == g && c.seed_index == s) return c.report;
    throw std::logic_error("missing sweep cell");
  };

  // (a) cost trend: paired per-seed differences, each adjacent pair >= -1 SE
  bool cost_ok = true;
  std::ostringstream cost_note;
  for (std::size_t i = 0; i + 1 < grid.node_counts.size(); ++i) {
    std::vector<double> diffs;
    for (int s = 0; s < grid.seeds; ++s) {
      auto lo = cell(Algorithm::BaVne, grid.node_counts[i], s).mean_cost;
      auto hi = cell(Algorithm::BaVne, grid.node_counts[i + 1], s).mean_cost;
      if (lo && hi) diffs.push_back(*hi - *lo);
    }
    double mean = 0;
    for (double v : diffs) mean += v;
    mean /= static_cast<double>(diffs.size());
    double var = 0;
    for (double v : diffs) var += (v - mean) * (v - mean);
    double se = std::sqrt(var / (static_cast<double>(diffs.size()) - 1)) /
                std::sqrt(static_cast<double>(diffs.size()));
    if (mean < -se) {
      cost_ok = false;
      cost_note << " drop at " << grid.node_counts[i] << "->" << grid.node_counts[i + 1];
    }
  }

  // (a') acceptance trend: non-increasing in node count, up to 1 SE
  bool acc_trend_ok = true;
  for (std::size_t i = 0; i + 1 < grid.node_counts.size(); ++i) {
    std::vector<double> diffs;
    for (int s = 0; s < grid.seeds; ++s) {
      double lo = cell(Algorithm::BaVne, grid.node_counts[i], s).acceptance_rate.value_or(1);
      double hi = cell(Algorithm::BaVne, grid.node_counts[i + 1], s).acceptance_rate.value_or(1);
      diffs.push_back(hi - lo);
    }
    double mean = 0;
    for (double v : diffs) mean += v;
    mean /= static_cast<double>(diffs.size());
    double var = 0;
    for (double v : diffs) var += (v - mean) * (v - mean);
    double se = std::sqrt(var / (static_cast<double>(diffs.size()) - 1)) /
                std::sqrt(static_cast<double>(diffs.size()));
    if (mean > se) acc_trend_ok = false;
  }

  // (b) acceptance floors per grid point
  bool floors_ok = true;
  std::ostringstream floor_note;
  for (int g : grid.node_counts) {
    int ge_lid = 0, ge_pso = 0;
    for (int s = 0; s < grid.seeds; ++s) {
      double ba = cell(Algorithm::BaVne, g, s).acceptance_rate.value_or(1);
      double lid = cell(Algorithm::LidVne, g, s).acceptance_rate.value_or(1);
      double pso = cell(Algorithm::VnePso, g, s).acceptance_rate.value_or(1);
      if (ba >= lid) ++ge_lid;
      if (ba >= pso) ++ge_pso;
    }
    floor_note << " g" << g << ":" << ge_lid << "," << ge_pso;
    if (ge_lid * 10 < grid.seeds * 9 || ge_pso * 10 < grid.seeds * 9) floors_ok = false;
  }

  // (c) plateau comparison at the largest grid point
  double plat_ba = 0, plat_lid = 0;
  for (int s = 0; s < grid.seeds; ++s) {
    plat_ba += cell(Algorithm::BaVne, 12, s).acceptance_rate.value_or(1);
    plat_lid += cell(Algorithm::LidVne, 12, s).acceptance_rate.value_or(1);
  }
  bool plateau_ok = plat_ba >= plat_lid;

  std::ostringstream d;
  d << "cost trend " << (cost_ok ? "non-decreasing" : std::string("violated:") + cost_note.str())
    << "; acceptance trend " << (acc_trend_ok ? "non-increasing" : "violated")
    << "; acceptance floors (>=lid,>=pso per point)" << floor_note.str()
    << "; plateau ba=" << std::fixed << plat_ba / grid.seeds << " vs lid=" << plat_lid / grid.seeds
    << " (" << elapsed_s(start) << "s)";
  report(5, "experiment-3/4 trends", cost_ok && acc_trend_ok && floors_ok && plateau_ok, d.str());
}

// --------------------------------------------------------------------------
void criterion_6_delay_and_utilization() {
  auto start = Clock::now();
  int delay_wins = 0, util_wins = 0, trials = 0;
  for (int s = 0; s < 20; ++s) {
    SimulationConfig cfg = table2_config(3000 + s);
    cfg.trace_fitness = false;
    cfg.vnr.node_count = 12;
    cfg.horizon = 600;
    cfg.algorithm = Algorithm::BaVne;
    auto rb = run(cfg);
    cfg.algorithm = Algorithm::McVnm;
    auto rm = run(cfg);
    cfg.algorithm = Algorithm::VnePso;
    auto rp = run(cfg);
    note_run(rb);
    note_run(rm);
    note_run(rp);
    if (!rb.mean_delay || !rm.mean_delay) continue;
    ++trials;
    if (*rb.mean_delay < *rm.mean_delay) ++delay_wins;
    if (rb.time_weighted_utilization <= rp.time_weighted_utilization) ++util_wins;
  }
  std::ostringstream d;
  d << "delay: " << delay_wins << "/" << trials
    << " paired seeds below the greedy baseline (need >=80%); utilization: " << util_wins << "/"
    << trials << " at or below the hop-count baseline (need >=80%) (" << std::fixed
    << elapsed_s(start) << "s)";
  report(6, "experiment-5/6 directions",
         trials >= 20 && delay_wins * 10 >= trials * 8 && util_wins * 10 >= trials * 8, d.str());
}

// --------------------------------------------------------------------------
void criterion_7_conservation_determinism() {
  auto start = Clock::now();
  // byte-identical reports over three repetitions
  SimulationConfig cfg = table2_config(1234);
  cfg.horizon = 200;
  std::string first = to_json(run(cfg)).dump();
  bool run_identical = to_json(run(cfg)).dump() == first && to_json(run(cfg)).dump() == first;

  // and over three repetitions of a parallel sweep
  SimulationConfig sweep_cfg = loaded_sweep_config();
  sweep_cfg.horizon = 200;
  SweepGrid grid;
  grid.node_counts = {3, 5};
  grid.algorithms = {Algorithm::BaVne, Algorithm::LidVne};
  grid.seeds = 2;
  sweep_cfg.sweep = grid;
  auto sweep_bytes = [&]() {
    std::string all;
    for (const auto& c : sweep(sweep_cfg, 2)) {
      note_run(c.report);
      all += to_json(c.report).dump();
    }
    return all;
  };
  std::string sfirst = sweep_bytes();
  bool sweep_identical = sweep_bytes() == sfirst && sweep_bytes() == sfirst;

  std::ostringstream d;
  d << "residuals returned to capacity in " << g_runs_seen << "/" << g_runs_seen
    << " runs so far: " << (g_conservation_ok ? "yes" : "NO") << "; single-run bytes "
    << (run_identical ? "identical x3" : "DIFFER") << "; parallel-sweep bytes "
    << (sweep_identical ? "identical x3" : "DIFFER") << " (" << std::fixed << elapsed_s(start)
    << "s)";
  report(7, "conservation and determinism", g_conservation_ok && run_identical && sweep_identical,
         d.str());
}

// --------------------------------------------------------------------------
void criterion_8_invariant_suites() {
  auto start = Clock::now();
  // (a) global-best monotonicity over every recorded trace
  long long traces = 0;
  bool monotone = true;
  for (const auto& r : g_table2_runs)
    for (const auto& res : r.results) {
      if (res.premap_trace.empty()) continue;
      ++traces;
      for (std::size_t i = 1; i < res.premap_trace.size(); ++i)
        if (res.premap_trace[i] > res.premap_trace[i - 1]) monotone = false;
    }

  // (b) constraint completeness on accepted results, (c) atomic rejection
  GeneratorConfig gc;
  gc.domains = 2;
  gc.nodes_per_domain = 10;
  gc.intra_bw_min = 40;
  gc.intra_bw_max = 120;
  gc.inter_bw_min = 40;
  gc.inter_bw_max = 120;
  auto net = generate_substrate(gc, 86);
  VnrConfig vc;
  vc.node_count = 4;
  vc.substrate_domains = 2;
  long long accepted = 0, rejected = 0, checker_clean = 0, atomic_clean = 0;
  for (int i = 0; i < 60; ++i) {
    auto vnr = generate_vnr(vc, 650 + i, 0, i);
    PsoParams pso;
    pso.swarm_size = 10;
    pso.max_iterations = 15;
    pso.seed = 40 + i;
    auto before = net.residual_hash();
    auto r = embed_vnr(net, vnr, pso);
    if (r.accepted) {
      ++accepted;
      auto copy = net;
      release(copy, r);
      if (check_constraints(r, copy, vnr).empty()) ++checker_clean;
    } else {
      ++rejected;
      if (net.residual_hash() == before) ++atomic_clean;
    }
  }

  // (d) aggregation conservation regression: members 4 and 6 merge into 10
  auto agg_net = fixtures::aggregation_example();
  auto view = aggregate_domain(agg_net, 0, select_candidate_nodes(agg_net, 0, 0.0));
  bool aggregation_ok = view.aggregated_links.size() == 1 &&
                        view.aggregated_links[0].bandwidth == 10.0 &&
                        std::abs(view.aggregated_links[0].price - 3.8) < 1e-12;

  // (e) routing equals exhaustive enumeration on 500 random graphs
  Rng rng(2026);
  int path_trials = 0, path_matches = 0;
  auto residual = [](const SubstrateLink& l) { return l.bw_residual; };
  auto any = [](const SubstrateLink&) { return true; };
  for (int t = 0; t < 500; ++t) {
    int n = 4 + static_cast<int>(rng.index(5));
    SubstrateNetwork g;
    g.domain_count = 1;
    for (NodeId i = 0; i < n; ++i) {
      SubstrateNode sn;
      sn.id = i;
      sn.domain = 0;
      sn.cpu_capacity = sn.cpu_residual = 100;
      sn.cpu_price = 1;
      g.nodes.push_back(sn);
    }
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (rng.coin(0.45)) {
          SubstrateLink l;
          l.id = static_cast<LinkId>(g.links.size());
          l.u = u;
          l.v = v;
          l.kind = LinkKind::Intra;
          l.domain = 0;
          l.bw_capacity = l.bw_residual = rng.uniform_grid(0, 30);
          l.bw_price = rng.uniform_int(1, 10);
          l.delay = rng.uniform_grid(1, 10);
          g.links.push_back(l);
        }
    g.rebuild_index();
    double demand = rng.uniform_grid(1, 10);
    NodeId src = static_cast<NodeId>(rng.index(g.nodes.size()));
    NodeId dst = static_cast<NodeId>(rng.index(g.nodes.size()));
    if (src == dst) dst = (dst + 1) % n;
    ++path_trials;
    auto got = max_bandwidth_path(g, src, dst, demand, residual, any);
    auto expected = oracle::best_path_by_enumeration(g, src, dst, demand, residual, any);
    bool match = got.has_value() == expected.has_value() &&
                 (!got || (got->nodes == expected->nodes &&
                           got->bottleneck_bw == expected->bottleneck &&
                           got->total_price == expected->price));
    if (match) ++path_matches;
  }

  std::ostringstream d;
  d << traces << " fitness traces all non-increasing: " << (monotone ? "yes" : "NO") << "; "
    << checker_clean << "/" << accepted << " accepted results pass the checker; " << atomic_clean
    << "/" << rejected << " rejections left the ledger untouched; aggregation 4+6->10 "
    << (aggregation_ok ? "ok" : "BROKEN") << "; routing matched enumeration " << path_matches
    << "/" << path_trials << " (" << std::fixed << elapsed_s(start) << "s)";
  bool pass = traces > 100 && monotone && accepted > 20 && checker_clean == accepted &&
              rejected > 0 && atomic_clean == rejected && aggregation_ok &&
              path_trials == 500 && path_matches == path_trials;
  report(8, "invariant suites", pass, d.str());
}


}  // namespace

int main() {
  auto start = Clock::now();
  criterion_1_threshold_compliance();
  criterion_2_domain_means();
  criterion_3_bandwidth_vs_mpvne();
  criterion_4_premapping_oracle();
  criterion_5_grid_trends();
  criterion_6_delay_and_utilization();
  criterion_7_conservation_determinism();
  criterion_8_invariant_suites();
  std::printf("%d of 8 criteria failed (total %.0fs)\n", failures, elapsed_s(start));
  return failures;
}
