#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "bavne/embedding.hpp"

namespace bavne {

// Comparison algorithms rebuilt from their one-paragraph descriptions; each
// is a simplified stand-in ("-like"), not a reproduction of the cited work.
enum class BaselineKind { VnePso, McVnm, LidVne, MpVne };

inline const char* to_string(BaselineKind k) {
  switch (k) {
    case BaselineKind::VnePso: return "vne-pso";
    case BaselineKind::McVnm: return "mc-vnm";
    case BaselineKind::LidVne: return "lid-vne";
    case BaselineKind::MpVne: return "mp-vne";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// VNE-PSO-like: candidate quality is hop count to the nearest boundary node,
// optimized by the same discrete PSO; no bandwidth threshold anywhere and
// links take the first minimum-hop path found.
// ---------------------------------------------------------------------------

class HopDistanceFitness {
 public:
  HopDistanceFitness(const GlobalCandidateNetwork& gcn, const VirtualNetworkRequest&) {
    for (const auto& view : gcn.views)
      for (const auto& c : view.candidate_nodes) hops_[c.node] = c.hops_to_boundary();
  }
  double operator()(const Position& pos) const {
    double total = 0;
    for (NodeId n : pos) total += hops_.at(n);
    return total;
  }

 private:
  std::map<NodeId, int> hops_;
};

inline EmbeddingResult embed_vne_pso(SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
                                     const PsoParams& pso, bool record_trace = false) {
  PipelineSpec spec;
  spec.candidate_mode = CandidateMode::Reachable;
  spec.routing = RoutingMode::FirstFound;
  spec.qualified_routing = false;
  spec.record_trace = record_trace;
  spec.premap = [&pso](const GlobalCandidateNetwork& gcn, const VirtualNetworkRequest& v,
                       std::vector<double>* trace) {
    auto premap = run_premapping(gcn, v, pso, HopDistanceFitness(gcn, v));
    if (trace) *trace = premap.trace;
    return premap.position;
  };
  return run_pipeline(net, vnr, spec);
}

// ---------------------------------------------------------------------------
// MP-VNE-like: multi-objective fitness folded into one scalar,
// w1*cost + w2*(1/bottleneck bandwidth) + w3*delay, over unfiltered
// candidates; routing is minimum hops with the cheapest price tie-break.
// ---------------------------------------------------------------------------

struct MpVneWeights {
  double cost = 1.0 / 3;
  double bandwidth = 1.0 / 3;
  double delay = 1.0 / 3;
};

class WeightedObjectiveFitness {
 public:
  WeightedObjectiveFitness(const GlobalCandidateNetwork& gcn, const VirtualNetworkRequest& vnr,
                           MpVneWeights weights)
      : gcn_(&gcn), vnr_(&vnr), weights_(weights) {
    for (const auto& view : gcn.views)
      for (const auto& c : view.candidate_nodes) price_[c.node] = c.cpu_price;
  }

  double operator()(const Position& pos) const {
    double cost = 0, delay = 0, bottleneck = kInfinity;
    for (const auto& vn : vnr_->nodes) cost += vn.cpu_demand * price_.at(pos[vn.id]);
    for (const auto& vl : vnr_->links) {
      auto key = std::make_tuple(std::min(pos[vl.a], pos[vl.b]),
                                 std::max(pos[vl.a], pos[vl.b]), vl.id);
      auto it = memo_.find(key);
      if (it == memo_.end())
        it = memo_.emplace(key, gcn_cheapest_route(*gcn_, pos[vl.a], pos[vl.b], vl.bw_demand))
                 .first;
      if (!it->second) return kInfinity;
      cost += vl.bw_demand * it->second->price;
      delay += it->second->delay;
      bottleneck = std::min(bottleneck, it->second->bottleneck);
    }
    double bw_term = bottleneck == kInfinity ? 0 : 1.0 / bottleneck;
    return weights_.cost * cost + weights_.bandwidth * bw_term + weights_.delay * delay;
  }

 private:
  const GlobalCandidateNetwork* gcn_;
  const VirtualNetworkRequest* vnr_;
  MpVneWeights weights_;
  std::map<NodeId, double> price_;
  mutable std::map<std::tuple<NodeId, NodeId, int>, std::optional<GcnRoute>> memo_;
};

inline EmbeddingResult embed_mp_vne(SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
                                    const PsoParams& pso, MpVneWeights weights = {},
                                    bool record_trace = false) {
  PipelineSpec spec;
  spec.candidate_mode = CandidateMode::Reachable;
  spec.routing = RoutingMode::MinHopCheapest;
  spec.qualified_routing = false;
  spec.record_trace = record_trace;
  spec.premap = [&pso, weights](const GlobalCandidateNetwork& gcn,
                                const VirtualNetworkRequest& v, std::vector<double>* trace) {
    auto premap = run_premapping(gcn, v, pso, WeightedObjectiveFitness(gcn, v, weights));
    if (trace) *trace = premap.trace;
    return premap.position;
  };
  return run_pipeline(net, vnr, spec);
}

// ---------------------------------------------------------------------------
// LID-VNE-like: every domain picks hosts uniformly at random among
// CPU-feasible candidates; links take the first feasible path found.
// ---------------------------------------------------------------------------

inline EmbeddingResult embed_lid_vne(SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
                                     std::uint64_t seed) {
  PipelineSpec spec;
  spec.candidate_mode = CandidateMode::Reachable;
  spec.routing = RoutingMode::FirstFound;
  spec.qualified_routing = false;
  spec.premap = [seed](const GlobalCandidateNetwork& gcn, const VirtualNetworkRequest& v,
                       std::vector<double>*) {
    Rng rng(seed);
    CandidateSpace space = CandidateSpace::build(gcn, v);
    Position pos(v.nodes.size(), -1);
    std::set<NodeId> used;
    for (std::size_t k = 0; k < v.nodes.size(); ++k) {
      std::vector<NodeId> open;
      for (const CandidateNode* c : space.feasible[k])
        if (!used.count(c->node)) open.push_back(c->node);
      if (open.empty()) throw NoFeasibleCandidate(static_cast<int>(k));
      pos[k] = open[rng.index(open.size())];
      used.insert(pos[k]);
    }
    return pos;
  };
  return run_pipeline(net, vnr, spec);
}

// ---------------------------------------------------------------------------
// MC-VNM-like: pure greedy, no metaheuristic. Virtual links are taken in
// decreasing bandwidth demand; each is routed along the unique path of a
// minimum-unit-price spanning tree (Kruskal over links that can carry the
// demand), the cheapest-tree-path host pair first. Endpoints are pinned to
// the chosen path ends; leftover isolated virtual nodes get the cheapest
// feasible host.
// ---------------------------------------------------------------------------

namespace detail {

// Kruskal by (price, id) over links with enough effective bandwidth.
// Returns the tree adjacency: node -> (neighbor, link id).
template <class EffBw>
inline std::vector<std::vector<std::pair<NodeId, LinkId>>> min_price_spanning_forest(
    const SubstrateNetwork& net, double bw_demand, EffBw&& eff_bw) {
  std::vector<LinkId> order;
  for (const auto& l : net.links)
    if (eff_bw(l) >= bw_demand && eff_bw(l) > 0) order.push_back(l.id);
  std::sort(order.begin(), order.end(), [&net](LinkId a, LinkId b) {
    if (net.links[a].bw_price != net.links[b].bw_price)
      return net.links[a].bw_price < net.links[b].bw_price;
    return a < b;
  });
  std::vector<NodeId> parent(net.nodes.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<NodeId>(i);
  std::function<NodeId(NodeId)> find = [&](NodeId n) {
    while (parent[n] != n) n = parent[n] = parent[parent[n]];
    return n;
  };
  std::vector<std::vector<std::pair<NodeId, LinkId>>> tree(net.nodes.size());
  for (LinkId lid : order) {
    const auto& l = net.links[lid];
    NodeId ru = find(l.u), rv = find(l.v);
    if (ru == rv) continue;
    parent[ru] = rv;
    tree[l.u].emplace_back(l.v, lid);
    tree[l.v].emplace_back(l.u, lid);
  }
  for (auto& adj : tree) std::sort(adj.begin(), adj.end());
  return tree;
}

// Unique tree path from src to every reachable node: summed price and parents.
struct TreePaths {
  std::vector<double> price;
  std::vector<NodeId> parent;
  std::vector<LinkId> via;
};

inline TreePaths tree_paths(const SubstrateNetwork& net,
                            const std::vector<std::vector<std::pair<NodeId, LinkId>>>& tree,
                            NodeId src) {
  TreePaths out;
  out.price.assign(net.nodes.size(), kInfinity);
  out.parent.assign(net.nodes.size(), -1);
  out.via.assign(net.nodes.size(), -1);
  std::vector<NodeId> stack{src};
  out.price[src] = 0;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (const auto& [v, lid] : tree[u]) {
      if (out.price[v] != kInfinity) continue;
      out.price[v] = out.price[u] + net.links[lid].bw_price;
      out.parent[v] = u;
      out.via[v] = lid;
      stack.push_back(v);
    }
  }
  return out;
}

}  // namespace detail

inline EmbeddingResult embed_mc_vnm(SubstrateNetwork& net, const VirtualNetworkRequest& vnr) {
  EmbeddingResult result;
  result.vnr_id = vnr.id;

  auto thresholds = domain_thresholds(net);  // recorded for audit context only

  detail::Reservations reserved;
  auto eff = [&](const SubstrateLink& l) { return reserved.available(l); };

  std::map<int, NodeId> pinned;
  std::set<NodeId> used;

  auto feasible_hosts = [&](const VirtualNode& vn) {
    std::vector<NodeId> out;
    for (const auto& sn : net.nodes) {
      if (used.count(sn.id) || sn.cpu_residual < vn.cpu_demand) continue;
      if (std::find(vn.candidate_domains.begin(), vn.candidate_domains.end(), sn.domain) ==
          vn.candidate_domains.end())
        continue;
      out.push_back(sn.id);
    }
    return out;
  };

  std::vector<int> link_order;
  for (const auto& vl : vnr.links) link_order.push_back(vl.id);
  std::sort(link_order.begin(), link_order.end(), [&vnr](int a, int b) {
    if (vnr.links[a].bw_demand != vnr.links[b].bw_demand)
      return vnr.links[a].bw_demand > vnr.links[b].bw_demand;
    return a < b;
  });

  for (int vlid : link_order) {
    const auto& vl = vnr.links[vlid];
    std::vector<NodeId> ends_a = pinned.count(vl.a)
                                     ? std::vector<NodeId>{pinned[vl.a]}
                                     : feasible_hosts(vnr.nodes[vl.a]);
    std::vector<NodeId> ends_b = pinned.count(vl.b)
                                     ? std::vector<NodeId>{pinned[vl.b]}
                                     : feasible_hosts(vnr.nodes[vl.b]);
    if (ends_a.empty() || ends_b.empty())
      return detail::rejected(vnr.id, RejectReason::NoFeasibleCandidate);

    auto tree = detail::min_price_spanning_forest(net, vl.bw_demand, eff);

    struct Pick {
      double path_price = kInfinity;
      double host_price = kInfinity;
      NodeId u = -1, v = -1;
    } best;
    for (NodeId u : ends_a) {
      auto paths = detail::tree_paths(net, tree, u);
      for (NodeId v : ends_b) {
        if (v == u || paths.price[v] == kInfinity) continue;
        double host_price = net.nodes[u].cpu_price + net.nodes[v].cpu_price;
        bool better = paths.price[v] < best.path_price ||
                      (paths.price[v] == best.path_price &&
                       (host_price < best.host_price ||
                        (host_price == best.host_price &&
                         std::make_pair(u, v) < std::make_pair(best.u, best.v))));
        if (better) best = {paths.price[v], host_price, u, v};
      }
    }
    if (best.u < 0) return detail::rejected(vnr.id, RejectReason::NoFeasiblePath);

    // materialize the unique tree path
    auto paths = detail::tree_paths(net, tree, best.u);
    std::vector<NodeId> seq;
    for (NodeId n = best.v; n != -1; n = paths.parent[n]) seq.push_back(n);
    std::reverse(seq.begin(), seq.end());
    SubstratePath tree_path = make_path(net, seq, eff);

    for (auto [vid, host] : {std::pair{vl.a, best.u}, std::pair{vl.b, best.v}}) {
      if (!pinned.count(vid)) {
        pinned[vid] = host;
        used.insert(host);
        result.nodes.push_back({vid, host, vnr.nodes[vid].cpu_demand});
      }
    }
    for (LinkId lid : tree_path.links) {
      const auto& l = net.links[lid];
      if (l.kind == LinkKind::Intra)
        result.selected_links.push_back({lid, l.domain, l.bw_residual, thresholds[l.domain]});
      reserved.bw[lid] += vl.bw_demand;
    }
    result.links.push_back({vlid, vl.bw_demand, tree_path});
  }

  // isolated virtual nodes: cheapest feasible host, then smallest id
  for (const auto& vn : vnr.nodes) {
    if (pinned.count(vn.id)) continue;
    auto hosts = feasible_hosts(vn);
    if (hosts.empty()) return detail::rejected(vnr.id, RejectReason::NoFeasibleCandidate);
    NodeId cheapest = hosts.front();
    for (NodeId h : hosts)
      if (net.nodes[h].cpu_price < net.nodes[cheapest].cpu_price) cheapest = h;
    pinned[vn.id] = cheapest;
    used.insert(cheapest);
    result.nodes.push_back({vn.id, cheapest, vn.cpu_demand});
  }

  std::sort(result.nodes.begin(), result.nodes.end(),
            [](const NodeMapEntry& a, const NodeMapEntry& b) { return a.vnode < b.vnode; });
  std::sort(result.links.begin(), result.links.end(),
            [](const LinkMapEntry& a, const LinkMapEntry& b) { return a.vlink < b.vlink; });

  if (!check_constraints(result, net, vnr).empty())
    return detail::rejected(vnr.id, RejectReason::ConstraintViolation);

  result.cost = embedding_cost(result, net);
  for (const auto& e : result.links) result.total_delay += e.path.total_delay;

  try {
    result.accepted = true;
    allocate(net, result);
  } catch (const InsufficientResources&) {
    return detail::rejected(vnr.id, RejectReason::InsufficientResources);
  }
  return result;
}

}  // namespace bavne
