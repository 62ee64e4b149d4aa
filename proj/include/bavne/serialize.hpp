#pragma once

#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bavne/abstraction.hpp"
#include "bavne/simulation.hpp"
#include "bavne/types.hpp"

namespace bavne {

using Json = nlohmann::json;

// shortest-ish decimal that round-trips; used for CSV cells
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = std::strtod(buf, nullptr);
  if (back == v) {
    for (int prec = 1; prec <= 16; ++prec) {
      char shorter[64];
      std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
      if (std::strtod(shorter, nullptr) == v) return shorter;
    }
  }
  return buf;
}

// ---------------------------------------------------------------------------
// Substrate network
// ---------------------------------------------------------------------------

inline Json to_json(const SubstrateNetwork& net) {
  Json j;
  j["schema"] = "bavne.network/1";
  j["domains"] = net.domain_count;
  Json nodes = Json::array();
  for (const auto& n : net.nodes) {
    nodes.push_back({{"id", n.id},
                     {"domain", n.domain},
                     {"boundary", n.is_boundary},
                     {"cpu_capacity", n.cpu_capacity},
                     {"cpu_residual", n.cpu_residual},
                     {"cpu_price", n.cpu_price}});
  }
  j["nodes"] = std::move(nodes);
  Json links = Json::array();
  for (const auto& l : net.links) {
    links.push_back({{"id", l.id},
                     {"u", l.u},
                     {"v", l.v},
                     {"kind", l.kind == LinkKind::Intra ? "intra" : "inter"},
                     {"domain", l.domain},
                     {"bw_capacity", l.bw_capacity},
                     {"bw_residual", l.bw_residual},
                     {"bw_price", l.bw_price},
                     {"delay", l.delay}});
  }
  j["links"] = std::move(links);
  return j;
}

inline SubstrateNetwork network_from_json(const Json& j) {
  SubstrateNetwork net;
  net.domain_count = j.at("domains").get<int>();
  for (const auto& n : j.at("nodes")) {
    SubstrateNode sn;
    sn.id = n.at("id").get<NodeId>();
    sn.domain = n.at("domain").get<DomainId>();
    sn.is_boundary = n.at("boundary").get<bool>();
    sn.cpu_capacity = n.at("cpu_capacity").get<double>();
    sn.cpu_residual = n.at("cpu_residual").get<double>();
    sn.cpu_price = n.at("cpu_price").get<double>();
    net.nodes.push_back(sn);
  }
  for (const auto& l : j.at("links")) {
    SubstrateLink sl;
    sl.id = l.at("id").get<LinkId>();
    sl.u = l.at("u").get<NodeId>();
    sl.v = l.at("v").get<NodeId>();
    sl.kind = l.at("kind").get<std::string>() == "intra" ? LinkKind::Intra : LinkKind::Inter;
    sl.domain = l.at("domain").get<DomainId>();
    sl.bw_capacity = l.at("bw_capacity").get<double>();
    sl.bw_residual = l.at("bw_residual").get<double>();
    sl.bw_price = l.at("bw_price").get<double>();
    sl.delay = l.at("delay").get<double>();
    net.links.push_back(sl);
  }
  net.rebuild_index();
  return net;
}

// ---------------------------------------------------------------------------
// Virtual network request
// ---------------------------------------------------------------------------

inline Json to_json(const VirtualNetworkRequest& vnr) {
  Json j;
  j["schema"] = "bavne.vnr/1";
  j["id"] = vnr.id;
  j["arrival_time"] = vnr.arrival_time;
  j["lifetime"] = vnr.lifetime;
  Json nodes = Json::array();
  for (const auto& n : vnr.nodes)
    nodes.push_back(
        {{"id", n.id}, {"cpu_demand", n.cpu_demand}, {"candidate_domains", n.candidate_domains}});
  j["nodes"] = std::move(nodes);
  Json links = Json::array();
  for (const auto& l : vnr.links)
    links.push_back({{"id", l.id}, {"a", l.a}, {"b", l.b}, {"bw_demand", l.bw_demand}});
  j["links"] = std::move(links);
  return j;
}

// ---------------------------------------------------------------------------
// Aggregated domain view. Serializes exactly the uploaded information: the
// boundary ids, the synthetic aggregate node, merged links, and candidate
// records. Interior node ids appear nowhere outside candidate records, and
// interior link ids not at all.
// ---------------------------------------------------------------------------

inline Json to_json(const AggregatedDomainView& view) {
  Json j;
  j["schema"] = "bavne.view/1";
  j["domain"] = view.domain;
  j["boundary_nodes"] = view.boundary_nodes;
  j["aggregate_node"] = view.aggregate_node;
  Json agg = Json::array();
  for (const auto& l : view.aggregated_links)
    agg.push_back({{"boundary", l.boundary},
                   {"bandwidth", l.bandwidth},
                   {"price", l.price},
                   {"delay", l.delay},
                   {"member_count", l.member_count}});
  j["aggregated_links"] = std::move(agg);
  Json cands = Json::array();
  for (const auto& c : view.candidate_nodes) {
    Json links = Json::array();
    for (const auto& cl : c.links_to_boundary)
      links.push_back({{"boundary", cl.boundary},
                       {"bandwidth", cl.bandwidth},
                       {"price", cl.price},
                       {"delay", cl.delay},
                       {"hops", cl.hops}});
    cands.push_back({{"node", c.node},
                     {"domain", c.domain},
                     {"boundary", c.is_boundary},
                     {"cpu_residual", c.cpu_residual},
                     {"cpu_price", c.cpu_price},
                     {"links_to_boundary", std::move(links)}});
  }
  j["candidates"] = std::move(cands);
  return j;
}

// ---------------------------------------------------------------------------
// Embedding result
// ---------------------------------------------------------------------------

inline Json to_json(const EmbeddingResult& r) {
  Json j;
  j["vnr_id"] = r.vnr_id;
  j["accepted"] = r.accepted;
  j["reason"] = to_string(r.reason);
  j["cost"] = r.cost;
  j["total_delay"] = r.total_delay;
  Json nodes = Json::array();
  for (const auto& e : r.nodes)
    nodes.push_back({{"vnode", e.vnode}, {"snode", e.snode}, {"cpu_demand", e.cpu_demand}});
  j["nodes"] = std::move(nodes);
  Json links = Json::array();
  for (const auto& e : r.links) {
    links.push_back({{"vlink", e.vlink},
                     {"bw_demand", e.bw_demand},
                     {"path_nodes", e.path.nodes},
                     {"path_links", e.path.links},
                     {"bottleneck_bw", e.path.bottleneck_bw},
                     {"total_price", e.path.total_price},
                     {"total_delay", e.path.total_delay}});
  }
  j["links"] = std::move(links);
  Json sel = Json::array();
  for (const auto& s : r.selected_links)
    sel.push_back({{"link", s.link},
                   {"domain", s.domain},
                   {"residual_at_selection", s.residual_at_selection},
                   {"threshold_at_selection", s.threshold_at_selection}});
  j["selected_links"] = std::move(sel);
  if (!r.premap_trace.empty()) j["premap_trace"] = r.premap_trace;
  return j;
}

// ---------------------------------------------------------------------------
// Simulation config (both directions; the CLI reads this schema)
// ---------------------------------------------------------------------------

inline Json to_json(const SimulationConfig& cfg) {
  Json j;
  j["seed"] = cfg.seed;
  j["algorithm"] = to_string(cfg.algorithm);
  j["arrival_rate"] = cfg.arrival_rate;
  j["horizon"] = cfg.horizon;
  j["trace_fitness"] = cfg.trace_fitness;
  j["substrate"] = {{"domains", cfg.substrate.domains},
                    {"nodes_per_domain", cfg.substrate.nodes_per_domain},
                    {"boundary_per_domain", cfg.substrate.boundary_per_domain},
                    {"cpu_range", {cfg.substrate.cpu_min, cfg.substrate.cpu_max}},
                    {"node_price_range", {cfg.substrate.node_price_min, cfg.substrate.node_price_max}},
                    {"intra_bw_range", {cfg.substrate.intra_bw_min, cfg.substrate.intra_bw_max}},
                    {"intra_price_range", {cfg.substrate.intra_price_min, cfg.substrate.intra_price_max}},
                    {"intra_delay_range", {cfg.substrate.intra_delay_min, cfg.substrate.intra_delay_max}},
                    {"edge_prob", cfg.substrate.edge_prob},
                    {"inter_bw_range", {cfg.substrate.inter_bw_min, cfg.substrate.inter_bw_max}},
                    {"inter_price_range", {cfg.substrate.inter_price_min, cfg.substrate.inter_price_max}},
                    {"inter_delay_range", {cfg.substrate.inter_delay_min, cfg.substrate.inter_delay_max}},
                    {"extra_inter_link_prob", cfg.substrate.extra_inter_link_prob},
                    {"max_connect_attempts", cfg.substrate.max_connect_attempts}};
  j["vnr"] = {{"node_count", cfg.vnr.node_count},
              {"candidate_domains", cfg.vnr.candidate_domain_count},
              {"cpu_demand_range", {cfg.vnr.cpu_demand_min, cfg.vnr.cpu_demand_max}},
              {"bw_demand_range", {cfg.vnr.bw_demand_min, cfg.vnr.bw_demand_max}},
              {"edge_prob", cfg.vnr.edge_prob},
              {"mean_lifetime", cfg.vnr.mean_lifetime}};
  j["pso"] = {{"swarm_size", cfg.pso.swarm_size},
              {"max_iterations", cfg.pso.max_iterations},
              {"c1", cfg.pso.c1},
              {"c2", cfg.pso.c2},
              {"mutation_rate", cfg.pso.mutation_rate}};
  j["threshold"] = {{"plus_one", cfg.threshold.plus_one},
                    {"basis", cfg.threshold.use_capacity ? "capacity" : "residual"}};
  j["mp_weights"] = {{"cost", cfg.mp_weights.cost},
                     {"bandwidth", cfg.mp_weights.bandwidth},
                     {"delay", cfg.mp_weights.delay}};
  if (cfg.sweep) {
    Json algos = Json::array();
    for (Algorithm a : cfg.sweep->algorithms) algos.push_back(to_string(a));
    j["sweep"] = {{"node_counts", cfg.sweep->node_counts},
                  {"algorithms", std::move(algos)},
                  {"seeds", cfg.sweep->seeds}};
  }
  return j;
}

namespace detail {

template <class T>
inline void read_field(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

inline void read_range(const Json& j, const char* key, double& lo, double& hi) {
  if (!j.contains(key)) return;
  lo = j.at(key).at(0).get<double>();
  hi = j.at(key).at(1).get<double>();
}

inline void read_range(const Json& j, const char* key, int& lo, int& hi) {
  if (!j.contains(key)) return;
  lo = j.at(key).at(0).get<int>();
  hi = j.at(key).at(1).get<int>();
}

}  // namespace detail

inline SimulationConfig config_from_json(const Json& j) {
  SimulationConfig cfg;
  try {
    detail::read_field(j, "seed", cfg.seed);
    if (j.contains("algorithm")) {
      auto a = parse_algorithm(j.at("algorithm").get<std::string>());
      if (!a) throw ConfigError("unknown algorithm: " + j.at("algorithm").get<std::string>());
      cfg.algorithm = *a;
    }
    detail::read_field(j, "arrival_rate", cfg.arrival_rate);
    detail::read_field(j, "horizon", cfg.horizon);
    detail::read_field(j, "trace_fitness", cfg.trace_fitness);
    if (j.contains("substrate")) {
      const Json& s = j.at("substrate");
      detail::read_field(s, "domains", cfg.substrate.domains);
      detail::read_field(s, "nodes_per_domain", cfg.substrate.nodes_per_domain);
      detail::read_field(s, "boundary_per_domain", cfg.substrate.boundary_per_domain);
      detail::read_range(s, "cpu_range", cfg.substrate.cpu_min, cfg.substrate.cpu_max);
      detail::read_range(s, "node_price_range", cfg.substrate.node_price_min,
                         cfg.substrate.node_price_max);
      detail::read_range(s, "intra_bw_range", cfg.substrate.intra_bw_min,
                         cfg.substrate.intra_bw_max);
      detail::read_range(s, "intra_price_range", cfg.substrate.intra_price_min,
                         cfg.substrate.intra_price_max);
      detail::read_range(s, "intra_delay_range", cfg.substrate.intra_delay_min,
                         cfg.substrate.intra_delay_max);
      detail::read_field(s, "edge_prob", cfg.substrate.edge_prob);
      detail::read_range(s, "inter_bw_range", cfg.substrate.inter_bw_min,
                         cfg.substrate.inter_bw_max);
      detail::read_range(s, "inter_price_range", cfg.substrate.inter_price_min,
                         cfg.substrate.inter_price_max);
      detail::read_range(s, "inter_delay_range", cfg.substrate.inter_delay_min,
                         cfg.substrate.inter_delay_max);
      detail::read_field(s, "extra_inter_link_prob", cfg.substrate.extra_inter_link_prob);
      detail::read_field(s, "max_connect_attempts", cfg.substrate.max_connect_attempts);
    }
    if (j.contains("vnr")) {
      const Json& v = j.at("vnr");
      detail::read_field(v, "node_count", cfg.vnr.node_count);
      detail::read_field(v, "candidate_domains", cfg.vnr.candidate_domain_count);
      detail::read_range(v, "cpu_demand_range", cfg.vnr.cpu_demand_min, cfg.vnr.cpu_demand_max);
      detail::read_range(v, "bw_demand_range", cfg.vnr.bw_demand_min, cfg.vnr.bw_demand_max);
      detail::read_field(v, "edge_prob", cfg.vnr.edge_prob);
      detail::read_field(v, "mean_lifetime", cfg.vnr.mean_lifetime);
    }
    if (j.contains("pso")) {
      const Json& p = j.at("pso");
      detail::read_field(p, "swarm_size", cfg.pso.swarm_size);
      detail::read_field(p, "max_iterations", cfg.pso.max_iterations);
      detail::read_field(p, "c1", cfg.pso.c1);
      detail::read_field(p, "c2", cfg.pso.c2);
      detail::read_field(p, "mutation_rate", cfg.pso.mutation_rate);
    }
    if (j.contains("threshold")) {
      const Json& t = j.at("threshold");
      detail::read_field(t, "plus_one", cfg.threshold.plus_one);
      if (t.contains("basis")) {
        std::string basis = t.at("basis").get<std::string>();
        if (basis != "residual" && basis != "capacity")
          throw ConfigError("threshold basis must be residual or capacity");
        cfg.threshold.use_capacity = basis == "capacity";
      }
    }
    if (j.contains("mp_weights")) {
      const Json& w = j.at("mp_weights");
      detail::read_field(w, "cost", cfg.mp_weights.cost);
      detail::read_field(w, "bandwidth", cfg.mp_weights.bandwidth);
      detail::read_field(w, "delay", cfg.mp_weights.delay);
    }
    if (j.contains("sweep")) {
      const Json& s = j.at("sweep");
      SweepGrid grid;
      detail::read_field(s, "node_counts", grid.node_counts);
      if (s.contains("algorithms")) {
        grid.algorithms.clear();
        for (const auto& name : s.at("algorithms")) {
          auto a = parse_algorithm(name.get<std::string>());
          if (!a) throw ConfigError("unknown algorithm in sweep: " + name.get<std::string>());
          grid.algorithms.push_back(*a);
        }
      }
      detail::read_field(s, "seeds", grid.seeds);
      cfg.sweep = grid;
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  cfg.vnr.substrate_domains = cfg.substrate.domains;
  return cfg;
}

// ---------------------------------------------------------------------------
// Simulation report
// ---------------------------------------------------------------------------

inline Json to_json(const SimulationReport& r) {
  Json j;
  j["schema"] = "bavne.report/1";
  j["config"] = to_json(r.config);
  j["substrate"] = {{"nodes", r.substrate_nodes},
                    {"links", r.substrate_links},
                    {"domain_initial_mean_bw", r.domain_initial_mean_bw}};
  Json events = Json::array();
  for (const auto& e : r.events) {
    Json ev = {{"time", e.time},
               {"kind", std::string(1, e.kind)},
               {"vnr_id", e.vnr_id},
               {"utilization_after", e.utilization_after},
               {"cum_accepted", e.cum_accepted},
               {"cum_total", e.cum_total}};
    if (e.kind == 'A') {
      ev["accepted"] = e.accepted;
      ev["reason"] = to_string(e.reason);
      ev["cost"] = e.cost;
      ev["delay"] = e.delay;
      ev["vnr_nodes"] = e.vnr_nodes;
      ev["vnr_links"] = e.vnr_links;
    }
    events.push_back(std::move(ev));
  }
  j["events"] = std::move(events);
  Json results = Json::array();
  for (const auto& res : r.results) results.push_back(to_json(res));
  j["results"] = std::move(results);

  Json metrics;
  metrics["accepted"] = r.accepted;
  metrics["total"] = r.total;
  metrics["acceptance_rate"] = r.acceptance_rate ? Json(*r.acceptance_rate) : Json();
  metrics["final_utilization"] = r.final_utilization;
  metrics["time_weighted_utilization"] = r.time_weighted_utilization;
  metrics["mean_cost"] = r.mean_cost ? Json(*r.mean_cost) : Json();
  metrics["mean_delay"] = r.mean_delay ? Json(*r.mean_delay) : Json();
  metrics["total_cost"] = r.total_cost;
  Json sel;
  for (const auto& [d, v] : r.avg_selected_bandwidth) sel[std::to_string(d)] = v;
  metrics["avg_selected_bandwidth"] = std::move(sel);
  metrics["threshold_breaches"] = r.threshold_breaches;
  j["metrics"] = std::move(metrics);
  j["audits"] = {{"conservation_ok", r.conservation_ok}};
  return j;
}

// Five-index summary used by `compare`; reads a report JSON produced above.
struct ReportSummary {
  std::string algorithm;
  std::optional<double> acceptance_rate;
  std::optional<double> mean_cost;
  std::optional<double> mean_delay;
  double time_weighted_utilization = 0;
  std::optional<double> mean_selected_bandwidth;  // over all domains
};

inline ReportSummary summarize_report(const Json& j) {
  ReportSummary s;
  s.algorithm = j.at("config").at("algorithm").get<std::string>();
  const Json& m = j.at("metrics");
  if (!m.at("acceptance_rate").is_null())
    s.acceptance_rate = m.at("acceptance_rate").get<double>();
  if (!m.at("mean_cost").is_null()) s.mean_cost = m.at("mean_cost").get<double>();
  if (!m.at("mean_delay").is_null()) s.mean_delay = m.at("mean_delay").get<double>();
  s.time_weighted_utilization = m.at("time_weighted_utilization").get<double>();
  const Json& sel = m.at("avg_selected_bandwidth");
  if (sel.is_object() && !sel.empty()) {
    double sum = 0;
    for (const auto& [k, v] : sel.items()) sum += v.get<double>();
    s.mean_selected_bandwidth = sum / static_cast<double>(sel.size());
  }
  return s;
}

// ---------------------------------------------------------------------------
// Experiment CSV bundle. All six files share the header "grid,algorithm,
// seed,value"; the grid column is the domain index (exp1/exp2), the VNR node
// count (exp3-exp5), or the cumulative arrival count checkpoint (exp6).
// ---------------------------------------------------------------------------

inline std::map<std::string, std::string> experiment_csvs(const std::vector<SweepCell>& cells,
                                                          const SimulationConfig& base) {
  constexpr const char* kHeader = "grid,algorithm,seed,value\n";
  std::map<std::string, std::ostringstream> out;
  for (const char* name : {"exp1_avg_bandwidth", "exp2_bandwidth_vs_mpvne", "exp3_cost",
                           "exp4_acceptance", "exp5_delay", "exp6_utilization"})
    out[name] << kHeader;

  int anchor = base.vnr.node_count;
  bool anchor_present = false;
  for (const auto& c : cells)
    if (c.node_count == anchor) anchor_present = true;
  if (!anchor_present && !cells.empty()) anchor = cells.front().node_count;

  auto value_or_nan = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string("nan");
  };

  for (const auto& c : cells) {
    std::string algo = to_string(c.algorithm);
    const auto& r = c.report;
    if (c.node_count == anchor) {
      if (c.algorithm == Algorithm::BaVne) {
        for (std::size_t d = 0; d < r.domain_initial_mean_bw.size(); ++d)
          out["exp1_avg_bandwidth"]
              << d << ",domain-mean," << c.seed_index << ','
              << format_number(r.domain_initial_mean_bw[d]) << '\n';
        for (const auto& [d, v] : r.avg_selected_bandwidth)
          out["exp1_avg_bandwidth"]
              << d << ",ba-vne," << c.seed_index << ',' << format_number(v) << '\n';
      }
      if (c.algorithm == Algorithm::BaVne || c.algorithm == Algorithm::MpVne) {
        for (const auto& [d, v] : r.avg_selected_bandwidth)
          out["exp2_bandwidth_vs_mpvne"]
              << d << ',' << algo << ',' << c.seed_index << ',' << format_number(v) << '\n';
      }
      for (long long checkpoint = 25;; checkpoint += 25) {
        const EventRecord* at = nullptr;
        for (const auto& e : r.events)
          if (e.kind == 'A' && e.cum_total == checkpoint) at = &e;
        if (!at) break;
        out["exp6_utilization"] << checkpoint << ',' << algo << ',' << c.seed_index << ','
                                << format_number(at->utilization_after) << '\n';
      }
    }
    out["exp3_cost"] << c.node_count << ',' << algo << ',' << c.seed_index << ','
                     << value_or_nan(r.mean_cost) << '\n';
    out["exp4_acceptance"] << c.node_count << ',' << algo << ',' << c.seed_index << ','
                           << value_or_nan(r.acceptance_rate) << '\n';
    out["exp5_delay"] << c.node_count << ',' << algo << ',' << c.seed_index << ','
                      << value_or_nan(r.mean_delay) << '\n';
  }

  std::map<std::string, std::string> files;
  for (auto& [name, stream] : out) files[name + ".csv"] = stream.str();
  return files;
}

// per-request best-fitness traces for convergence plots
inline std::string fitness_trace_csv(const SimulationReport& r) {
  std::ostringstream os;
  os << "vnr,iteration,best_fitness\n";
  for (const auto& res : r.results) {
    for (std::size_t i = 0; i < res.premap_trace.size(); ++i) {
      os << res.vnr_id << ',' << i << ',';
      if (res.premap_trace[i] == kInfinity)
        os << "inf";
      else
        os << format_number(res.premap_trace[i]);
      os << '\n';
    }
  }
  return os.str();
}

// metric,value rows for a single run (--format csv)
inline std::string metrics_csv(const SimulationReport& r) {
  std::ostringstream os;
  os << "metric,value\n";
  os << "accepted," << r.accepted << '\n';
  os << "total," << r.total << '\n';
  os << "acceptance_rate," << (r.acceptance_rate ? format_number(*r.acceptance_rate) : "undefined")
     << '\n';
  os << "final_utilization," << format_number(r.final_utilization) << '\n';
  os << "time_weighted_utilization," << format_number(r.time_weighted_utilization) << '\n';
  os << "mean_cost," << (r.mean_cost ? format_number(*r.mean_cost) : "undefined") << '\n';
  os << "mean_delay," << (r.mean_delay ? format_number(*r.mean_delay) : "undefined") << '\n';
  os << "total_cost," << format_number(r.total_cost) << '\n';
  os << "threshold_breaches," << r.threshold_breaches << '\n';
  os << "conservation_ok," << (r.conservation_ok ? "true" : "false") << '\n';
  for (const auto& [d, v] : r.avg_selected_bandwidth)
    os << "avg_selected_bandwidth." << d << ',' << format_number(v) << '\n';
  return os.str();
}

}  // namespace bavne
