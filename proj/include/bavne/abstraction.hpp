#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "bavne/path.hpp"
#include "bavne/types.hpp"

namespace bavne {

// ---------------------------------------------------------------------------
// Per-domain average-bandwidth threshold.
//
// The published selection rule divides the domain's summed link bandwidth by
// the link count; the count+1 variant (guarding an empty domain) is kept
// behind plus_one. An empty domain yields 0 under either flag.
// ---------------------------------------------------------------------------
inline double domain_average_bandwidth(std::span<const double> bandwidths, bool plus_one) {
  if (bandwidths.empty()) return 0;
  double sum = 0;
  for (double b : bandwidths) sum += b;
  return sum / (static_cast<double>(bandwidths.size()) + (plus_one ? 1.0 : 0.0));
}

struct ThresholdOptions {
  bool plus_one = false;
  bool use_capacity = false;  // threshold over capacities instead of residuals
};

// Threshold per domain over its intra-domain links.
inline std::vector<double> domain_thresholds(const SubstrateNetwork& net,
                                             const ThresholdOptions& opt = {}) {
  std::vector<std::vector<double>> bws(static_cast<std::size_t>(net.domain_count));
  for (const auto& l : net.links)
    if (l.kind == LinkKind::Intra)
      bws[l.domain].push_back(opt.use_capacity ? l.bw_capacity : l.bw_residual);
  std::vector<double> out;
  out.reserve(bws.size());
  for (const auto& v : bws) out.push_back(domain_average_bandwidth(v, opt.plus_one));
  return out;
}

// ---------------------------------------------------------------------------
// Candidate node selection.
//
// Boundary nodes are always candidates. A non-boundary node becomes a
// candidate when hop-by-hop expansion from a boundary node reaches it over
// links that carry bandwidth (nonzero residual) and, when a threshold is
// given, meet it on every traversed hop. Each candidate records, per
// reachable boundary node, its best qualifying path: minimum hops, then
// maximum bottleneck, then lowest price.
// ---------------------------------------------------------------------------

struct CandidateLink {
  NodeId boundary = -1;
  double bandwidth = 0;  // bottleneck of the qualifying path
  double price = 0;      // summed unit prices along it
  double delay = 0;
  int hops = 0;
  std::vector<LinkId> links;
};

struct CandidateNode {
  NodeId node = -1;
  DomainId domain = -1;
  bool is_boundary = false;
  double cpu_residual = 0;
  double cpu_price = 0;
  std::vector<CandidateLink> links_to_boundary;  // sorted by boundary id

  int hops_to_boundary() const {
    if (is_boundary) return 0;
    int best = std::numeric_limits<int>::max();
    for (const auto& l : links_to_boundary) best = std::min(best, l.hops);
    return best;
  }
};

// threshold <= 0 disables the mean-bandwidth test and leaves only the
// nonzero-bandwidth reachability rule.
inline std::vector<CandidateNode> select_candidate_nodes(const SubstrateNetwork& net,
                                                         DomainId domain, double threshold) {
  auto qualified = [&](const SubstrateLink& l) {
    return l.kind == LinkKind::Intra && l.domain == domain && l.bw_residual > 0 &&
           l.bw_residual >= threshold;
  };
  auto eff = [](const SubstrateLink& l) { return l.bw_residual; };

  std::map<NodeId, CandidateNode> found;
  auto candidate_for = [&](NodeId n) -> CandidateNode& {
    auto [it, inserted] = found.try_emplace(n);
    if (inserted) {
      it->second.node = n;
      it->second.domain = domain;
      it->second.is_boundary = net.nodes[n].is_boundary;
      it->second.cpu_residual = net.nodes[n].cpu_residual;
      it->second.cpu_price = net.nodes[n].cpu_price;
    }
    return it->second;
  };

  for (NodeId b : net.boundary_by_domain[domain]) candidate_for(b);

  for (NodeId b : net.boundary_by_domain[domain]) {
    for (NodeId n : net.nodes_by_domain[domain]) {
      if (n == b) continue;
      auto path = max_bandwidth_path(net, b, n, 0, eff, qualified);
      if (!path) continue;
      CandidateLink cl;
      cl.boundary = b;
      cl.bandwidth = path->bottleneck_bw;
      cl.price = path->total_price;
      cl.delay = path->total_delay;
      cl.hops = path->hops();
      cl.links = path->links;
      candidate_for(n).links_to_boundary.push_back(cl);
    }
  }

  std::vector<CandidateNode> out;
  out.reserve(found.size());
  for (auto& [n, c] : found) {
    std::sort(c.links_to_boundary.begin(), c.links_to_boundary.end(),
              [](const CandidateLink& a, const CandidateLink& b) { return a.boundary < b.boundary; });
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Link aggregation: the uploaded domain view keeps boundary nodes, replaces
// the interior with one synthetic node, and merges every interior-boundary
// link per boundary node into a single link with summed bandwidth and a
// bandwidth-weighted mean unit price.
// ---------------------------------------------------------------------------

struct AggregatedLink {
  NodeId boundary = -1;
  double bandwidth = 0;  // sum of member bandwidths
  double price = 0;      // bandwidth-weighted mean of member prices
  double delay = 0;      // bandwidth-weighted mean of member delays
  int member_count = 0;
};

struct AggregatedDomainView {
  DomainId domain = -1;
  std::vector<NodeId> boundary_nodes;
  NodeId aggregate_node = -1;  // synthetic id, negative by convention
  std::vector<AggregatedLink> aggregated_links;
  std::vector<CandidateNode> candidate_nodes;
};

inline NodeId synthetic_node_id(DomainId domain) { return -(domain + 1); }

inline AggregatedDomainView aggregate_domain(const SubstrateNetwork& net, DomainId domain,
                                             std::vector<CandidateNode> candidates) {
  AggregatedDomainView view;
  view.domain = domain;
  view.boundary_nodes = net.boundary_by_domain[domain];
  view.aggregate_node = synthetic_node_id(domain);
  view.candidate_nodes = std::move(candidates);

  std::map<NodeId, AggregatedLink> per_boundary;
  for (const auto& l : net.links) {
    if (l.kind != LinkKind::Intra || l.domain != domain) continue;
    bool ub = net.nodes[l.u].is_boundary, vb = net.nodes[l.v].is_boundary;
    if (ub == vb) continue;  // interior-interior collapses; boundary-boundary stays raw
    NodeId b = ub ? l.u : l.v;
    auto& agg = per_boundary[b];
    agg.boundary = b;
    agg.bandwidth += l.bw_residual;
    agg.price += l.bw_residual * l.bw_price;
    agg.delay += l.bw_residual * l.delay;
    agg.member_count += 1;
  }
  for (auto& [b, agg] : per_boundary) {
    if (agg.bandwidth > 0) {
      agg.price /= agg.bandwidth;
      agg.delay /= agg.bandwidth;
    }
    view.aggregated_links.push_back(agg);
  }
  return view;
}

// ---------------------------------------------------------------------------
// Global candidate network: the pseudo topology assembled from the uploaded
// views and the inter-domain links. Carries a flattened edge list over
// candidate, boundary and synthetic vertices for pre-mapping estimates.
// ---------------------------------------------------------------------------

struct GcnEdge {
  NodeId a = -1;
  NodeId b = -1;
  double bandwidth = 0;
  double price = 0;
  double delay = 0;
};

struct GlobalCandidateNetwork {
  std::vector<AggregatedDomainView> views;
  std::vector<SubstrateLink> inter_domain_links;
  std::vector<GcnEdge> edges;
  std::map<NodeId, std::vector<int>> adjacency;  // vertex -> edge indices

  const CandidateNode* find_candidate(NodeId n) const {
    for (const auto& v : views)
      for (const auto& c : v.candidate_nodes)
        if (c.node == n) return &c;
    return nullptr;
  }

  // Candidates of one domain, restricted to those able to host cpu_demand.
  std::vector<const CandidateNode*> feasible_candidates(DomainId domain,
                                                        double cpu_demand) const {
    std::vector<const CandidateNode*> out;
    for (const auto& v : views) {
      if (v.domain != domain) continue;
      for (const auto& c : v.candidate_nodes)
        if (c.cpu_residual >= cpu_demand) out.push_back(&c);
    }
    return out;
  }
};

inline GlobalCandidateNetwork build_global_candidate_network(
    std::vector<AggregatedDomainView> views, std::vector<SubstrateLink> inter_domain_links) {
  GlobalCandidateNetwork gcn;
  gcn.views = std::move(views);
  gcn.inter_domain_links = std::move(inter_domain_links);

  auto add_edge = [&gcn](NodeId a, NodeId b, double bw, double price, double delay) {
    int idx = static_cast<int>(gcn.edges.size());
    gcn.edges.push_back({a, b, bw, price, delay});
    gcn.adjacency[a].push_back(idx);
    gcn.adjacency[b].push_back(idx);
  };

  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& view : gcn.views) {
    for (const auto& c : view.candidate_nodes) {
      for (const auto& cl : c.links_to_boundary) {
        auto key = std::minmax(c.node, cl.boundary);
        if (!seen.insert({key.first, key.second}).second) continue;
        add_edge(c.node, cl.boundary, cl.bandwidth, cl.price, cl.delay);
      }
    }
    for (const auto& al : view.aggregated_links)
      add_edge(view.aggregate_node, al.boundary, al.bandwidth, al.price, al.delay);
  }
  for (const auto& l : gcn.inter_domain_links)
    add_edge(l.u, l.v, l.bw_residual, l.bw_price, l.delay);

  // some component of the stitched graph must touch a boundary node of
  // every domain, otherwise the controller cannot see all of them
  if (gcn.views.size() > 1) {
    std::map<NodeId, int> component;
    int next_component = 0;
    for (const auto& [vertex, edge_ids] : gcn.adjacency) {
      if (component.count(vertex)) continue;
      int id = next_component++;
      std::vector<NodeId> stack{vertex};
      component[vertex] = id;
      while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        for (int e : gcn.adjacency.at(n)) {
          NodeId other = gcn.edges[e].a == n ? gcn.edges[e].b : gcn.edges[e].a;
          if (!component.count(other)) {
            component[other] = id;
            stack.push_back(other);
          }
        }
      }
    }
    bool any_common = false;
    for (int c = 0; c < next_component && !any_common; ++c) {
      bool covers_all = true;
      for (const auto& view : gcn.views) {
        bool in_component = false;
        for (NodeId b : view.boundary_nodes) {
          auto it = component.find(b);
          if (it != component.end() && it->second == c) in_component = true;
        }
        if (!in_component) covers_all = false;
      }
      if (covers_all) any_common = true;
    }
    if (!any_common) throw DisconnectedGlobalView();
  }
  return gcn;
}

// Cheapest estimated route between two pseudo-topology vertices among edges
// with bandwidth >= demand. Returns summed price, bottleneck bandwidth and
// summed delay, or nullopt when no estimate exists.
struct GcnRoute {
  double price = 0;
  double bottleneck = kInfinity;
  double delay = 0;
};

inline std::optional<GcnRoute> gcn_cheapest_route(const GlobalCandidateNetwork& gcn, NodeId src,
                                                  NodeId dst, double bw_demand) {
  if (src == dst) return GcnRoute{0, kInfinity, 0};
  std::map<NodeId, GcnRoute> best;
  std::set<std::pair<double, NodeId>> frontier;
  best[src] = GcnRoute{0, kInfinity, 0};
  frontier.insert({0.0, src});
  while (!frontier.empty()) {
    auto [pu, u] = *frontier.begin();
    frontier.erase(frontier.begin());
    if (u == dst) break;
    auto it = gcn.adjacency.find(u);
    if (it == gcn.adjacency.end()) continue;
    for (int ei : it->second) {
      const auto& e = gcn.edges[ei];
      if (e.bandwidth < bw_demand) continue;
      NodeId v = e.a == u ? e.b : e.a;
      double pv = pu + e.price;
      auto bit = best.find(v);
      if (bit != best.end() && bit->second.price <= pv) continue;
      if (bit != best.end()) frontier.erase({bit->second.price, v});
      best[v] = GcnRoute{pv, std::min(best[u].bottleneck, e.bandwidth),
                         best[u].delay + e.delay};
      frontier.insert({pv, v});
    }
  }
  auto it = best.find(dst);
  if (it == best.end()) return std::nullopt;
  return it->second;
}

}  // namespace bavne
