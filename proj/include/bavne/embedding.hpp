#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bavne/abstraction.hpp"
#include "bavne/metrics.hpp"
#include "bavne/path.hpp"
#include "bavne/pso.hpp"
#include "bavne/topology.hpp"
#include "bavne/types.hpp"

namespace bavne {

// Forecast cost of placing a virtual node on a candidate.
inline double premap_cost(const VirtualNode& vnode, const CandidateNode& candidate) {
  return vnode.cpu_demand * candidate.cpu_price;
}

// ---------------------------------------------------------------------------
// Constraint checking. Verifies the full mapping against the network and the
// request and returns every violation: CPU headroom, per-link bandwidth
// headroom, map cardinality, candidate-domain membership, substrate node
// reuse, and path well-formedness (direction-independent).
// ---------------------------------------------------------------------------

struct Violation {
  enum class Kind {
    NodeCpu,          // residual below demand
    LinkBandwidth,    // a path link below demand
    MapCardinality,   // virtual node/link not mapped exactly once
    CandidateDomain,  // host outside the node's candidate domains
    NodeReuse,        // substrate node hosting two virtual nodes
    PathInvalid,      // broken, non-simple, or endpoint-mismatched path
  };
  Kind kind;
  int vnode = -1;
  int vlink = -1;
  NodeId snode = -1;
  LinkId slink = -1;
  std::string detail;
};

inline std::vector<Violation> check_constraints(const EmbeddingResult& result,
                                                const SubstrateNetwork& net,
                                                const VirtualNetworkRequest& vnr) {
  std::vector<Violation> out;
  auto add = [&out](Violation v) { out.push_back(std::move(v)); };

  std::map<int, int> node_hits;
  for (const auto& e : result.nodes) ++node_hits[e.vnode];
  for (const auto& vn : vnr.nodes) {
    if (node_hits[vn.id] != 1) {
      add({Violation::Kind::MapCardinality, vn.id, -1, -1, -1,
           "virtual node mapped " + std::to_string(node_hits[vn.id]) + " times"});
    }
  }

  std::map<NodeId, std::vector<int>> hosts;
  for (const auto& e : result.nodes) {
    if (e.snode < 0 || e.snode >= static_cast<NodeId>(net.nodes.size())) {
      add({Violation::Kind::PathInvalid, e.vnode, -1, e.snode, -1, "unknown substrate node"});
      continue;
    }
    hosts[e.snode].push_back(e.vnode);
    const auto& sn = net.nodes[e.snode];
    const auto& vn = vnr.nodes[e.vnode];
    if (sn.cpu_residual < vn.cpu_demand)
      add({Violation::Kind::NodeCpu, e.vnode, -1, e.snode, -1,
           "cpu residual below demand"});
    bool in_domain = std::find(vn.candidate_domains.begin(), vn.candidate_domains.end(),
                               sn.domain) != vn.candidate_domains.end();
    if (!in_domain)
      add({Violation::Kind::CandidateDomain, e.vnode, -1, e.snode, -1,
           "host domain " + std::to_string(sn.domain) + " not a candidate domain"});
  }
  for (const auto& [snode, vnodes] : hosts) {
    if (vnodes.size() > 1)
      add({Violation::Kind::NodeReuse, vnodes[1], -1, snode, -1,
           "substrate node hosts " + std::to_string(vnodes.size()) + " virtual nodes"});
  }

  std::map<int, int> link_hits;
  for (const auto& e : result.links) ++link_hits[e.vlink];
  for (const auto& vl : vnr.links) {
    if (link_hits[vl.id] != 1)
      add({Violation::Kind::MapCardinality, -1, vl.id, -1, -1,
           "virtual link mapped " + std::to_string(link_hits[vl.id]) + " times"});
  }

  for (const auto& e : result.links) {
    const auto& vl = vnr.links[e.vlink];
    const auto& path = e.path;
    const NodeMapEntry* ma = result.find_node(vl.a);
    const NodeMapEntry* mb = result.find_node(vl.b);
    if (!ma || !mb) continue;  // cardinality violation already recorded

    if (path.nodes.size() < 2 || path.links.size() + 1 != path.nodes.size()) {
      add({Violation::Kind::PathInvalid, -1, e.vlink, -1, -1, "malformed path"});
      continue;
    }
    bool forward = path.nodes.front() == ma->snode && path.nodes.back() == mb->snode;
    bool backward = path.nodes.front() == mb->snode && path.nodes.back() == ma->snode;
    if (!forward && !backward)
      add({Violation::Kind::PathInvalid, -1, e.vlink, -1, -1,
           "path endpoints do not match the node mapping"});

    std::set<NodeId> distinct(path.nodes.begin(), path.nodes.end());
    if (distinct.size() != path.nodes.size())
      add({Violation::Kind::PathInvalid, -1, e.vlink, -1, -1, "path is not simple"});

    for (std::size_t i = 0; i < path.links.size(); ++i) {
      const SubstrateLink* l = net.find_link(path.nodes[i], path.nodes[i + 1]);
      if (!l || l->id != path.links[i]) {
        add({Violation::Kind::PathInvalid, -1, e.vlink, -1, path.links[i],
             "listed link does not join consecutive path nodes"});
        continue;
      }
      if (l->bw_residual < e.bw_demand)
        add({Violation::Kind::LinkBandwidth, -1, e.vlink, -1, l->id,
             "link residual below demand"});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Embedding pipeline, shared by the bandwidth-aware algorithm and the
// PSO/random baselines. The stages follow the flow: per-domain candidate
// selection, view aggregation, pseudo-topology assembly, pre-mapping, node
// commit, link routing with in-request reservations, constraint check, and
// an atomic ledger commit. Any failure yields a rejected result with the
// cause and no ledger mutation.
// ---------------------------------------------------------------------------

enum class CandidateMode {
  Qualified,  // hop-by-hop expansion filtered by the domain bandwidth mean
  Reachable,  // nonzero-bandwidth reachability only
};

enum class RoutingMode {
  MaxBandwidth,    // min hops, then max bottleneck, then min price
  MinHopCheapest,  // min hops, then min price
  FirstFound,      // first feasible min-hop path in BFS order
};

// premap(gcn, vnr, trace_out) -> position indexed by virtual node id
using PremapFn =
    std::function<Position(const GlobalCandidateNetwork&, const VirtualNetworkRequest&,
                           std::vector<double>*)>;

struct PipelineSpec {
  CandidateMode candidate_mode = CandidateMode::Qualified;
  RoutingMode routing = RoutingMode::MaxBandwidth;
  bool qualified_routing = true;  // threshold-filter the routed intra links
  PremapFn premap;
  ThresholdOptions threshold;
  bool record_trace = false;
};

namespace detail {

struct Reservations {
  std::map<LinkId, double> bw;
  double available(const SubstrateLink& l) const {
    auto it = bw.find(l.id);
    return it == bw.end() ? l.bw_residual : l.bw_residual - it->second;
  }
};

inline EmbeddingResult rejected(int vnr_id, RejectReason reason) {
  EmbeddingResult r;
  r.vnr_id = vnr_id;
  r.accepted = false;
  r.reason = reason;
  return r;
}

}  // namespace detail

inline EmbeddingResult run_pipeline(SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
                                    const PipelineSpec& spec) {
  EmbeddingResult result;
  result.vnr_id = vnr.id;

  auto thresholds = domain_thresholds(net, spec.threshold);

  // local controllers: candidate selection and aggregation per domain
  GlobalCandidateNetwork gcn;
  try {
    std::vector<AggregatedDomainView> views;
    for (DomainId d = 0; d < net.domain_count; ++d) {
      double threshold = spec.candidate_mode == CandidateMode::Qualified ? thresholds[d] : 0;
      views.push_back(aggregate_domain(net, d, select_candidate_nodes(net, d, threshold)));
    }
    std::vector<SubstrateLink> inter;
    for (const auto& l : net.links)
      if (l.kind == LinkKind::Inter) inter.push_back(l);
    gcn = build_global_candidate_network(std::move(views), std::move(inter));
  } catch (const DisconnectedGlobalView&) {
    return detail::rejected(vnr.id, RejectReason::NoFeasiblePath);
  }

  // a virtual link whose demand exceeds every bridge that could carry it can
  // never route, whatever the pre-mapping does
  {
    double max_edge = 0, max_inter = 0;
    for (const auto& e : gcn.edges) max_edge = std::max(max_edge, e.bandwidth);
    for (const auto& l : gcn.inter_domain_links) max_inter = std::max(max_inter, l.bw_residual);
    for (const auto& vl : vnr.links) {
      if (vl.bw_demand > max_edge) return detail::rejected(vnr.id, RejectReason::NoFeasiblePath);
      const auto& da = vnr.nodes[vl.a].candidate_domains;
      const auto& db = vnr.nodes[vl.b].candidate_domains;
      bool disjoint = true;
      for (DomainId d : da)
        if (std::find(db.begin(), db.end(), d) != db.end()) disjoint = false;
      if (disjoint && vl.bw_demand > max_inter)
        return detail::rejected(vnr.id, RejectReason::NoFeasiblePath);
    }
  }

  // pre-mapping on the pseudo topology
  Position position;
  try {
    position = spec.premap(gcn, vnr, spec.record_trace ? &result.premap_trace : nullptr);
  } catch (const NoFeasibleCandidate&) {
    return detail::rejected(vnr.id, RejectReason::NoFeasibleCandidate);
  } catch (const PremappingFailed&) {
    return detail::rejected(vnr.id, RejectReason::PremappingFailed);
  }

  // node commit, largest CPU demand first
  std::vector<int> order;
  for (const auto& vn : vnr.nodes) order.push_back(vn.id);
  std::sort(order.begin(), order.end(), [&vnr](int a, int b) {
    if (vnr.nodes[a].cpu_demand != vnr.nodes[b].cpu_demand)
      return vnr.nodes[a].cpu_demand > vnr.nodes[b].cpu_demand;
    return a < b;
  });
  for (int vid : order) {
    NodeId host = position[vid];
    if (host < 0 || net.nodes[host].cpu_residual < vnr.nodes[vid].cpu_demand)
      return detail::rejected(vnr.id, RejectReason::ConstraintViolation);
    result.nodes.push_back({vid, host, vnr.nodes[vid].cpu_demand});
  }
  std::sort(result.nodes.begin(), result.nodes.end(),
            [](const NodeMapEntry& a, const NodeMapEntry& b) { return a.vnode < b.vnode; });

  // link routing with in-request reservations; intra-domain links first,
  // then the inter-domain ones over boundary and endpoint-domain topology
  // Demand feasibility tracks in-request reservations; the threshold test
  // compares the ledger residual, which is what "at selection time" means
  // while the whole request commits atomically at the end.
  detail::Reservations reserved;
  auto eff = [&](const SubstrateLink& l) { return reserved.available(l); };
  auto qualifies = [&](const SubstrateLink& l) {
    if (l.kind != LinkKind::Intra || !spec.qualified_routing) return true;
    return l.bw_residual >= thresholds[l.domain];
  };

  std::vector<int> intra_links, inter_links;
  for (const auto& vl : vnr.links) {
    DomainId da = net.nodes[position[vl.a]].domain;
    DomainId db = net.nodes[position[vl.b]].domain;
    (da == db ? intra_links : inter_links).push_back(vl.id);
  }

  auto route = [&](int vlid) -> std::optional<SubstratePath> {
    const auto& vl = vnr.links[vlid];
    switch (spec.routing) {
      case RoutingMode::MaxBandwidth:
        return max_bandwidth_path(net, position[vl.a], position[vl.b], vl.bw_demand, eff,
                                  qualifies, true);
      case RoutingMode::MinHopCheapest:
        return max_bandwidth_path(net, position[vl.a], position[vl.b], vl.bw_demand, eff,
                                  qualifies, false);
      case RoutingMode::FirstFound:
        return first_found_path(net, position[vl.a], position[vl.b], vl.bw_demand, eff, qualifies);
    }
    return std::nullopt;
  };

  auto commit_path = [&](int vlid, const SubstratePath& path) {
    const auto& vl = vnr.links[vlid];
    for (LinkId lid : path.links) {
      const auto& l = net.links[lid];
      if (l.kind == LinkKind::Intra)
        result.selected_links.push_back({lid, l.domain, l.bw_residual, thresholds[l.domain]});
      reserved.bw[lid] += vl.bw_demand;
    }
    result.links.push_back({vlid, vl.bw_demand, path});
  };

  // Same-domain links are embedded first, then the cross-domain ones. Both
  // route over the filtered substrate (every traversed intra link passes its
  // domain's qualification); min-hop keeps same-domain paths inside their
  // domain whenever one exists, and a cross-domain excursion remains legal
  // when the qualified interior happens to be split, mirroring the aggregate
  // transit the pre-mapping estimate already allows.
  for (const auto& group : {intra_links, inter_links}) {
    for (int vlid : group) {
      auto path = route(vlid);
      if (!path) return detail::rejected(vnr.id, RejectReason::NoFeasiblePath);
      commit_path(vlid, *path);
    }
  }
  std::sort(result.links.begin(), result.links.end(),
            [](const LinkMapEntry& a, const LinkMapEntry& b) { return a.vlink < b.vlink; });

  if (!check_constraints(result, net, vnr).empty())
    return detail::rejected(vnr.id, RejectReason::ConstraintViolation);

  result.cost = embedding_cost(result, net);
  result.total_delay = 0;
  for (const auto& e : result.links) result.total_delay += e.path.total_delay;

  try {
    result.accepted = true;
    allocate(net, result);
  } catch (const InsufficientResources&) {
    return detail::rejected(vnr.id, RejectReason::InsufficientResources);
  }
  return result;
}

// Bandwidth-aware embedding: qualified candidates, cost-minimizing PSO
// pre-mapping, and max-bottleneck routing over qualified links.
inline EmbeddingResult embed_vnr(SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
                                 const PsoParams& pso, const ThresholdOptions& threshold = {},
                                 bool record_trace = false) {
  PipelineSpec spec;
  spec.candidate_mode = CandidateMode::Qualified;
  spec.routing = RoutingMode::MaxBandwidth;
  spec.qualified_routing = true;
  spec.threshold = threshold;
  spec.record_trace = record_trace;
  spec.premap = [&pso](const GlobalCandidateNetwork& gcn, const VirtualNetworkRequest& v,
                       std::vector<double>* trace) {
    auto premap = run_premapping(gcn, v, pso);
    if (trace) *trace = premap.trace;
    return premap.position;
  };
  return run_pipeline(net, vnr, spec);
}

}  // namespace bavne
