// Test-side oracles: brute-force enumerations and independently coded
// evaluators that the implementation under test is checked against. Nothing
// here calls the search/routing code paths being verified.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "bavne/abstraction.hpp"
#include "bavne/types.hpp"

namespace oracle {

using namespace bavne;

// Every simple path between src and dst whose links all pass `ok`,
// enumerated by depth-first search. Only for tiny graphs.
template <class Ok>
inline std::vector<std::vector<NodeId>> enumerate_simple_paths(const SubstrateNetwork& net,
                                                               NodeId src, NodeId dst, Ok&& ok) {
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> current{src};
  std::set<NodeId> visited{src};
  std::function<void(NodeId)> dfs = [&](NodeId u) {
    if (u == dst) {
      out.push_back(current);
      return;
    }
    for (const auto& [v, lid] : net.adjacency[u]) {
      if (visited.count(v) || !ok(net.links[lid])) continue;
      visited.insert(v);
      current.push_back(v);
      dfs(v);
      current.pop_back();
      visited.erase(v);
    }
  };
  dfs(src);
  return out;
}

struct PathFacts {
  std::vector<NodeId> nodes;
  double bottleneck = kInfinity;
  double price = 0;
};

template <class EffBw>
inline PathFacts path_facts(const SubstrateNetwork& net, const std::vector<NodeId>& nodes,
                            EffBw&& eff_bw) {
  PathFacts f;
  f.nodes = nodes;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const SubstrateLink* l = net.find_link(nodes[i], nodes[i + 1]);
    f.bottleneck = std::min(f.bottleneck, eff_bw(*l));
    f.price += l->bw_price;
  }
  return f;
}

// Reference selection: among minimum-hop feasible simple paths, maximum
// bottleneck, then minimum price, then lexicographically smallest sequence.
template <class EffBw, class Ok>
inline std::optional<PathFacts> best_path_by_enumeration(const SubstrateNetwork& net, NodeId src,
                                                         NodeId dst, double demand,
                                                         EffBw&& eff_bw, Ok&& qualified) {
  auto ok = [&](const SubstrateLink& l) {
    return qualified(l) && eff_bw(l) >= demand && eff_bw(l) > 0;
  };
  auto all = enumerate_simple_paths(net, src, dst, ok);
  if (all.empty()) return std::nullopt;
  std::size_t min_hops = SIZE_MAX;
  for (const auto& p : all) min_hops = std::min(min_hops, p.size() - 1);
  std::optional<PathFacts> best;
  for (const auto& p : all) {
    if (p.size() - 1 != min_hops) continue;
    PathFacts f = path_facts(net, p, eff_bw);
    if (!best || f.bottleneck > best->bottleneck ||
        (f.bottleneck == best->bottleneck &&
         (f.price < best->price || (f.price == best->price && f.nodes < best->nodes))))
      best = f;
  }
  return best;
}

// All injective assignments over per-slot choice lists.
inline void enumerate_assignments(const std::vector<std::vector<NodeId>>& choices,
                                  std::vector<std::vector<NodeId>>& out) {
  std::vector<NodeId> current(choices.size(), -1);
  std::set<NodeId> used;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == choices.size()) {
      out.push_back(current);
      return;
    }
    for (NodeId c : choices[k]) {
      if (used.count(c)) continue;
      used.insert(c);
      current[k] = c;
      rec(k + 1);
      current[k] = -1;
      used.erase(c);
    }
  };
  rec(0);
}

// Cheapest pseudo-topology route price by Bellman-Ford over the raw edge
// list (independent of the Dijkstra implementation).
inline std::optional<double> bf_route_price(const GlobalCandidateNetwork& gcn, NodeId src,
                                            NodeId dst, double demand) {
  if (src == dst) return 0.0;
  std::map<NodeId, double> dist;
  dist[src] = 0;
  std::size_t vertex_bound = gcn.adjacency.size() + 2;
  for (std::size_t round = 0; round < vertex_bound; ++round) {
    bool changed = false;
    for (const auto& e : gcn.edges) {
      if (e.bandwidth < demand) continue;
      for (auto [from, to] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}}) {
        auto it = dist.find(from);
        if (it == dist.end()) continue;
        double nd = it->second + e.price;
        auto jt = dist.find(to);
        if (jt == dist.end() || nd < jt->second) {
          dist[to] = nd;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  auto it = dist.find(dst);
  if (it == dist.end()) return std::nullopt;
  return it->second;
}

// Independent evaluation of a pre-mapping scheme: forecast node costs plus
// per-link demand times the Bellman-Ford route price.
inline double independent_premap_fitness(const std::vector<NodeId>& position,
                                         const GlobalCandidateNetwork& gcn,
                                         const VirtualNetworkRequest& vnr) {
  std::map<NodeId, double> cpu_price;
  for (const auto& view : gcn.views)
    for (const auto& c : view.candidate_nodes) cpu_price[c.node] = c.cpu_price;
  double total = 0;
  for (const auto& vn : vnr.nodes) total += vn.cpu_demand * cpu_price.at(position[vn.id]);
  for (const auto& vl : vnr.links) {
    auto price = bf_route_price(gcn, position[vl.a], position[vl.b], vl.bw_demand);
    if (!price) return kInfinity;
    total += vl.bw_demand * *price;
  }
  return total;
}

// Double-entry re-summation of the mapping cost directly from path node
// sequences and the price ledger.
inline double recompute_cost(const EmbeddingResult& result, const SubstrateNetwork& net) {
  double node_term = 0, link_term = 0;
  for (const auto& e : result.nodes) node_term += net.nodes[e.snode].cpu_price * e.cpu_demand;
  for (const auto& e : result.links) {
    for (std::size_t i = 0; i + 1 < e.path.nodes.size(); ++i) {
      const SubstrateLink* l = net.find_link(e.path.nodes[i], e.path.nodes[i + 1]);
      link_term += e.bw_demand * l->bw_price;
    }
  }
  return node_term + link_term;
}

// Brute-force candidate set under the reachability and threshold rules:
// iterative closure from the boundary set over admissible links.
inline std::set<NodeId> candidate_set_by_closure(const SubstrateNetwork& net, DomainId domain,
                                                 double threshold) {
  std::set<NodeId> selected(net.boundary_by_domain[domain].begin(),
                            net.boundary_by_domain[domain].end());
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& l : net.links) {
      if (l.kind != LinkKind::Intra || l.domain != domain) continue;
      if (l.bw_residual <= 0 || l.bw_residual < threshold) continue;
      for (auto [from, to] : {std::pair{l.u, l.v}, std::pair{l.v, l.u}}) {
        if (selected.count(from) && !selected.count(to)) {
          selected.insert(to);
          grew = true;
        }
      }
    }
  }
  return selected;
}

}  // namespace oracle
