#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <set>
#include <tuple>
#include <vector>

#include "bavne/types.hpp"

namespace bavne {

namespace detail {

constexpr int kUnreached = -1;

// BFS hop distances from src over links admitted by `ok`. Neighbors are
// visited in ascending node id (adjacency is sorted), which `parent` relies
// on for first-found semantics.
template <class Ok>
inline std::vector<int> hop_distances(const SubstrateNetwork& net, NodeId src, Ok&& ok,
                                      std::vector<NodeId>* parent = nullptr) {
  std::vector<int> dist(net.nodes.size(), kUnreached);
  if (parent) parent->assign(net.nodes.size(), -1);
  std::queue<NodeId> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop();
    for (const auto& [v, lid] : net.adjacency[u]) {
      if (dist[v] != kUnreached || !ok(net.links[lid])) continue;
      dist[v] = dist[u] + 1;
      if (parent) (*parent)[v] = u;
      q.push(v);
    }
  }
  return dist;
}

}  // namespace detail

// Materializes path bookkeeping from a node sequence.
template <class EffBw>
inline SubstratePath make_path(const SubstrateNetwork& net, const std::vector<NodeId>& nodes,
                               EffBw&& eff_bw) {
  SubstratePath p;
  p.nodes = nodes;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const SubstrateLink* l = net.find_link(nodes[i], nodes[i + 1]);
    p.links.push_back(l->id);
    p.bottleneck_bw = std::min(p.bottleneck_bw, eff_bw(*l));
    p.total_price += l->bw_price;
    p.total_delay += l->delay;
  }
  return p;
}

// ---------------------------------------------------------------------------
// max_bandwidth_path
//
// Among minimum-hop simple paths whose every admitted link carries at least
// bw_demand of effective bandwidth, picks the one with the largest bottleneck,
// breaking ties by lower summed unit price and then by lexicographically
// smallest node sequence. Setting maximize_bottleneck=false skips the
// bottleneck stage and yields the cheapest minimum-hop path under the same
// tie-breaking.
//
// eff_bw(link) is the bandwidth the caller considers available (residual
// minus any tentative reservations); qualified(link) is the admission filter
// (threshold tests, domain scoping).
// ---------------------------------------------------------------------------
template <class EffBw, class Qualified>
inline std::optional<SubstratePath> max_bandwidth_path(const SubstrateNetwork& net, NodeId src,
                                                       NodeId dst, double bw_demand,
                                                       EffBw&& eff_bw, Qualified&& qualified,
                                                       bool maximize_bottleneck = true) {
  if (src == dst) return SubstratePath{{}, {}, kInfinity, 0, 0};

  auto feasible = [&](const SubstrateLink& l) {
    return qualified(l) && eff_bw(l) >= bw_demand && eff_bw(l) > 0;
  };

  auto dist_all = detail::hop_distances(net, src, feasible);
  if (dist_all[dst] == detail::kUnreached) return std::nullopt;
  const int hops = dist_all[dst];

  // Largest bandwidth floor that still admits a path of exactly `hops` hops.
  double floor_bw = bw_demand;
  if (maximize_bottleneck) {
    std::set<double> values;
    for (const auto& l : net.links)
      if (feasible(l)) values.insert(eff_bw(l));
    std::vector<double> sorted(values.begin(), values.end());
    std::size_t lo = 0, hi = sorted.size() - 1;  // sorted[lo] always admits
    while (lo < hi) {
      std::size_t mid = (lo + hi + 1) / 2;
      auto d = detail::hop_distances(
          net, src, [&](const SubstrateLink& l) { return feasible(l) && eff_bw(l) >= sorted[mid]; });
      if (d[dst] == hops)
        lo = mid;
      else
        hi = mid - 1;
    }
    floor_bw = sorted[lo];
  }

  auto admitted = [&](const SubstrateLink& l) { return feasible(l) && eff_bw(l) >= floor_bw; };
  auto dist = detail::hop_distances(net, src, admitted);

  // Min summed price to dst along the layered DAG (links that advance one
  // BFS layer). Prices are integer-valued, so the sums compare exactly.
  std::vector<double> price_to_dst(net.nodes.size(), kInfinity);
  price_to_dst[dst] = 0;
  std::vector<std::vector<NodeId>> by_layer(static_cast<std::size_t>(hops) + 1);
  for (NodeId n = 0; n < static_cast<NodeId>(net.nodes.size()); ++n)
    if (dist[n] != detail::kUnreached && dist[n] <= hops) by_layer[dist[n]].push_back(n);
  for (int layer = hops - 1; layer >= 0; --layer) {
    for (NodeId u : by_layer[layer]) {
      for (const auto& [v, lid] : net.adjacency[u]) {
        const auto& l = net.links[lid];
        if (!admitted(l) || dist[v] != layer + 1) continue;
        price_to_dst[u] = std::min(price_to_dst[u], l.bw_price + price_to_dst[v]);
      }
    }
  }

  // Forward greedy: smallest next node id that still completes a cheapest
  // path. All remaining candidates have equal length, so this yields the
  // lexicographically smallest node sequence.
  std::vector<NodeId> seq{src};
  NodeId u = src;
  for (int step = 0; step < hops; ++step) {
    NodeId next = -1;
    for (const auto& [v, lid] : net.adjacency[u]) {
      const auto& l = net.links[lid];
      if (!admitted(l) || dist[v] != dist[u] + 1) continue;
      if (l.bw_price + price_to_dst[v] == price_to_dst[u]) {
        next = v;
        break;  // adjacency sorted ascending
      }
    }
    seq.push_back(next);
    u = next;
  }
  return make_path(net, seq, eff_bw);
}

// First feasible minimum-hop path in deterministic BFS order (ascending
// neighbor ids).
template <class EffBw, class Qualified>
inline std::optional<SubstratePath> first_found_path(const SubstrateNetwork& net, NodeId src,
                                                     NodeId dst, double bw_demand, EffBw&& eff_bw,
                                                     Qualified&& qualified) {
  if (src == dst) return SubstratePath{{}, {}, kInfinity, 0, 0};
  auto feasible = [&](const SubstrateLink& l) {
    return qualified(l) && eff_bw(l) >= bw_demand && eff_bw(l) > 0;
  };
  std::vector<NodeId> parent;
  auto dist = detail::hop_distances(net, src, feasible, &parent);
  if (dist[dst] == detail::kUnreached) return std::nullopt;
  std::vector<NodeId> seq;
  for (NodeId n = dst; n != -1; n = parent[n]) seq.push_back(n);
  std::reverse(seq.begin(), seq.end());
  return make_path(net, seq, eff_bw);
}

// Single-source cheapest paths by summed link unit price (Dijkstra), ties by
// fewer hops then smaller predecessor id. Used by the greedy baseline.
struct CheapestPaths {
  std::vector<double> price;
  std::vector<int> hops;
  std::vector<NodeId> parent;
};

template <class EffBw, class Qualified>
inline CheapestPaths cheapest_paths(const SubstrateNetwork& net, NodeId src,
                                    double bw_demand, EffBw&& eff_bw, Qualified&& qualified) {
  CheapestPaths out;
  out.price.assign(net.nodes.size(), kInfinity);
  out.hops.assign(net.nodes.size(), 0);
  out.parent.assign(net.nodes.size(), -1);
  auto feasible = [&](const SubstrateLink& l) {
    return qualified(l) && eff_bw(l) >= bw_demand && eff_bw(l) > 0;
  };
  std::set<std::tuple<double, int, NodeId>> frontier;
  out.price[src] = 0;
  frontier.insert({0.0, 0, src});
  while (!frontier.empty()) {
    auto [pu, hu, u] = *frontier.begin();
    frontier.erase(frontier.begin());
    for (const auto& [v, lid] : net.adjacency[u]) {
      const auto& l = net.links[lid];
      if (!feasible(l)) continue;
      double pv = pu + l.bw_price;
      int hv = hu + 1;
      bool better = pv < out.price[v] ||
                    (pv == out.price[v] && out.parent[v] != -1 &&
                     (hv < out.hops[v] || (hv == out.hops[v] && u < out.parent[v])));
      if (!better) continue;
      frontier.erase({out.price[v], out.hops[v], v});
      out.price[v] = pv;
      out.hops[v] = hv;
      out.parent[v] = u;
      frontier.insert({pv, hv, v});
    }
  }
  return out;
}

template <class EffBw>
inline std::optional<SubstratePath> extract_path(const SubstrateNetwork& net,
                                                 const CheapestPaths& paths, NodeId src,
                                                 NodeId dst, EffBw&& eff_bw) {
  if (src == dst) return SubstratePath{{}, {}, kInfinity, 0, 0};
  if (paths.price[dst] == kInfinity) return std::nullopt;
  std::vector<NodeId> seq;
  for (NodeId n = dst; n != -1; n = paths.parent[n]) seq.push_back(n);
  std::reverse(seq.begin(), seq.end());
  return make_path(net, seq, eff_bw);
}

}  // namespace bavne
