#pragma once

#include <map>
#include <queue>
#include <utility>
#include <vector>

#include "bavne/rng.hpp"
#include "bavne/types.hpp"

namespace bavne {

namespace detail {

// connectivity over an edge list restricted to the given node set
inline bool is_connected(const std::vector<NodeId>& members,
                         const std::vector<std::pair<NodeId, NodeId>>& edges) {
  if (members.empty()) return true;
  std::map<NodeId, std::vector<NodeId>> adj;
  for (NodeId n : members) adj[n];
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<NodeId> stack{members.front()};
  std::map<NodeId, bool> seen;
  seen[members.front()] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    for (NodeId m : adj[n]) {
      if (!seen[m]) {
        seen[m] = true;
        ++reached;
        stack.push_back(m);
      }
    }
  }
  return reached == members.size();
}

// k distinct indices from [0, n), drawn without replacement
inline std::vector<int> sample_without_replacement(int n, int k, Rng& rng) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[i] = i;
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    std::size_t j = rng.index(pool.size());
    out.push_back(pool[j]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// generate_substrate: multi-domain random substrate.
//
// Per domain: node pairs are linked with edge_prob and the domain is
// resampled until its intra subgraph is connected (bounded attempts).
// Boundary nodes are then drawn per domain. Every domain pair gets at
// least one inter-domain link between random boundary nodes; the other
// boundary pairs are linked with extra_inter_link_prob so the global
// view is always reachable.
// ---------------------------------------------------------------------------
inline SubstrateNetwork generate_substrate(const GeneratorConfig& cfg, std::uint64_t seed) {
  if (cfg.domains < 1 || cfg.nodes_per_domain < 1 || cfg.boundary_per_domain < 1)
    throw ConfigError("generator config fields must be positive");
  if (cfg.edge_prob < 0 || cfg.edge_prob > 1)
    throw ConfigError("edge_prob must lie in [0,1]");

  Rng rng(seed);
  SubstrateNetwork net;
  net.domain_count = cfg.domains;

  auto add_link = [&net](NodeId u, NodeId v, LinkKind kind, DomainId dom, double bw,
                         double price, double delay) {
    SubstrateLink l;
    l.id = static_cast<LinkId>(net.links.size());
    l.u = u;
    l.v = v;
    l.kind = kind;
    l.domain = dom;
    l.bw_capacity = l.bw_residual = bw;
    l.bw_price = price;
    l.delay = delay;
    net.links.push_back(l);
  };

  for (DomainId d = 0; d < cfg.domains; ++d) {
    NodeId base = d * cfg.nodes_per_domain;
    for (int i = 0; i < cfg.nodes_per_domain; ++i) {
      SubstrateNode n;
      n.id = base + i;
      n.domain = d;
      n.cpu_capacity = n.cpu_residual = rng.uniform_grid(cfg.cpu_min, cfg.cpu_max);
      n.cpu_price = rng.uniform_int(cfg.node_price_min, cfg.node_price_max);
      net.nodes.push_back(n);
    }

    // intra links, resampled until the domain is connected
    std::vector<NodeId> members(static_cast<std::size_t>(cfg.nodes_per_domain));
    for (int i = 0; i < cfg.nodes_per_domain; ++i) members[i] = base + i;

    int attempt = 0;
    for (;; ++attempt) {
      if (attempt >= cfg.max_connect_attempts)
        throw GenerationError("domain " + std::to_string(d) +
                                  " did not connect after " + std::to_string(attempt) +
                                  " attempts",
                              attempt);
      std::vector<SubstrateLink> drawn;
      std::vector<std::pair<NodeId, NodeId>> edges;
      for (int i = 0; i < cfg.nodes_per_domain; ++i) {
        for (int j = i + 1; j < cfg.nodes_per_domain; ++j) {
          if (!rng.coin(cfg.edge_prob)) continue;
          SubstrateLink l;
          l.u = base + i;
          l.v = base + j;
          l.bw_capacity = l.bw_residual = rng.uniform_grid(cfg.intra_bw_min, cfg.intra_bw_max);
          l.bw_price = rng.uniform_int(cfg.intra_price_min, cfg.intra_price_max);
          l.delay = rng.uniform_grid(cfg.intra_delay_min, cfg.intra_delay_max);
          drawn.push_back(l);
          edges.emplace_back(l.u, l.v);
        }
      }
      if (!detail::is_connected(members, edges)) continue;
      for (auto& l : drawn)
        add_link(l.u, l.v, LinkKind::Intra, d, l.bw_capacity, l.bw_price, l.delay);
      break;
    }

    int nb = std::min(cfg.boundary_per_domain, cfg.nodes_per_domain);
    for (int idx : detail::sample_without_replacement(cfg.nodes_per_domain, nb, rng))
      net.nodes[base + idx].is_boundary = true;
  }

  // inter-domain wiring over boundary nodes
  for (DomainId a = 0; a < cfg.domains; ++a) {
    for (DomainId b = a + 1; b < cfg.domains; ++b) {
      std::vector<std::pair<NodeId, NodeId>> pairs;
      for (const auto& na : net.nodes)
        if (na.domain == a && na.is_boundary)
          for (const auto& nb : net.nodes)
            if (nb.domain == b && nb.is_boundary) pairs.emplace_back(na.id, nb.id);
      if (pairs.empty()) continue;
      std::size_t guaranteed = rng.index(pairs.size());
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i != guaranteed && !rng.coin(cfg.extra_inter_link_prob)) continue;
        add_link(pairs[i].first, pairs[i].second, LinkKind::Inter, -1,
                 rng.uniform_grid(cfg.inter_bw_min, cfg.inter_bw_max),
                 rng.uniform_int(cfg.inter_price_min, cfg.inter_price_max),
                 rng.uniform_grid(cfg.inter_delay_min, cfg.inter_delay_max));
      }
    }
  }

  net.rebuild_index();
  return net;
}

// ---------------------------------------------------------------------------
// generate_vnr: connected random demand graph with per-node candidate domains.
// ---------------------------------------------------------------------------
inline VirtualNetworkRequest generate_vnr(const VnrConfig& cfg, std::uint64_t seed,
                                          double arrival_time, int vnr_id = 0) {
  if (cfg.node_count < 1) throw ConfigError("vnr node_count must be >= 1");
  if (cfg.candidate_domain_count > cfg.substrate_domains)
    throw ConfigError("candidate domain count exceeds substrate domain count");

  Rng rng(seed);
  VirtualNetworkRequest vnr;
  vnr.id = vnr_id;
  vnr.arrival_time = arrival_time;
  vnr.lifetime = rng.exponential(cfg.mean_lifetime);

  for (int i = 0; i < cfg.node_count; ++i) {
    VirtualNode n;
    n.id = i;
    n.cpu_demand = rng.uniform_grid(cfg.cpu_demand_min, cfg.cpu_demand_max);
    auto doms = detail::sample_without_replacement(cfg.substrate_domains,
                                                   cfg.candidate_domain_count, rng);
    std::sort(doms.begin(), doms.end());
    n.candidate_domains.assign(doms.begin(), doms.end());
    vnr.nodes.push_back(n);
  }

  std::vector<NodeId> members(static_cast<std::size_t>(cfg.node_count));
  for (int i = 0; i < cfg.node_count; ++i) members[i] = i;

  int attempt = 0;
  for (;; ++attempt) {
    if (attempt >= cfg.max_connect_attempts)
      throw GenerationError("vnr did not connect after " + std::to_string(attempt) +
                               " attempts",
                           attempt);
    std::vector<VirtualLink> drawn;
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 0; i < cfg.node_count; ++i) {
      for (int j = i + 1; j < cfg.node_count; ++j) {
        if (!rng.coin(cfg.edge_prob)) continue;
        VirtualLink l;
        l.a = i;
        l.b = j;
        l.bw_demand = rng.uniform_grid(cfg.bw_demand_min, cfg.bw_demand_max);
        drawn.push_back(l);
        edges.emplace_back(i, j);
      }
    }
    if (!detail::is_connected(members, edges)) continue;
    for (auto& l : drawn) {
      l.id = static_cast<int>(vnr.links.size());
      vnr.links.push_back(l);
    }
    break;
  }
  return vnr;
}

// ---------------------------------------------------------------------------
// Ledger: allocate / release. Both are all-or-nothing; allocate verifies the
// summed demands of the result against current residuals before mutating.
// ---------------------------------------------------------------------------

inline void allocate(SubstrateNetwork& net, const EmbeddingResult& result) {
  std::map<NodeId, double> cpu_need;
  std::map<LinkId, double> bw_need;
  for (const auto& e : result.nodes) cpu_need[e.snode] += e.cpu_demand;
  for (const auto& e : result.links)
    for (LinkId l : e.path.links) bw_need[l] += e.bw_demand;

  for (const auto& [n, need] : cpu_need)
    if (net.nodes[n].cpu_residual < need) throw InsufficientResources(true, n);
  for (const auto& [l, need] : bw_need)
    if (net.links[l].bw_residual < need) throw InsufficientResources(false, l);

  for (const auto& [n, need] : cpu_need) net.nodes[n].cpu_residual -= need;
  for (const auto& [l, need] : bw_need) net.links[l].bw_residual -= need;
  net.active_embeddings.insert(result.vnr_id);
}

inline void release(SubstrateNetwork& net, const EmbeddingResult& result) {
  if (net.active_embeddings.erase(result.vnr_id) == 0) throw DoubleRelease(result.vnr_id);
  for (const auto& e : result.nodes) {
    auto& n = net.nodes[e.snode];
    n.cpu_residual += e.cpu_demand;
    if (n.cpu_residual > n.cpu_capacity)
      throw std::logic_error("node residual exceeds capacity on release");
  }
  for (const auto& e : result.links) {
    for (LinkId lid : e.path.links) {
      auto& l = net.links[lid];
      l.bw_residual += e.bw_demand;
      if (l.bw_residual > l.bw_capacity)
        throw std::logic_error("link residual exceeds capacity on release");
    }
  }
}

}  // namespace bavne
