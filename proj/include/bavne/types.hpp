#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace bavne {

using NodeId = int;
using LinkId = int;
using DomainId = int;

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Substrate model
// ---------------------------------------------------------------------------

struct SubstrateNode {
  NodeId id = -1;
  DomainId domain = 0;
  bool is_boundary = false;
  double cpu_capacity = 0;
  double cpu_residual = 0;
  double cpu_price = 0;  // currency per compute unit
};

enum class LinkKind { Intra, Inter };

struct SubstrateLink {
  LinkId id = -1;
  NodeId u = -1;
  NodeId v = -1;
  LinkKind kind = LinkKind::Intra;
  DomainId domain = -1;  // owning domain for intra links, -1 for inter
  double bw_capacity = 0;
  double bw_residual = 0;
  double bw_price = 0;  // currency per bandwidth unit
  double delay = 0;

  NodeId other(NodeId n) const { return n == u ? v : u; }
};

class SubstrateNetwork {
 public:
  int domain_count = 0;
  std::vector<SubstrateNode> nodes;  // index == id
  std::vector<SubstrateLink> links;  // index == id
  // adjacency[n] = (neighbor, link), sorted by neighbor id
  std::vector<std::vector<std::pair<NodeId, LinkId>>> adjacency;
  std::vector<std::vector<NodeId>> nodes_by_domain;
  std::vector<std::vector<NodeId>> boundary_by_domain;

  // ids of embeddings currently holding resources, for double-release checks
  std::unordered_set<int> active_embeddings;

  void rebuild_index() {
    adjacency.assign(nodes.size(), {});
    nodes_by_domain.assign(static_cast<std::size_t>(domain_count), {});
    boundary_by_domain.assign(static_cast<std::size_t>(domain_count), {});
    pair_index_.clear();
    for (const auto& n : nodes) {
      nodes_by_domain[n.domain].push_back(n.id);
      if (n.is_boundary) boundary_by_domain[n.domain].push_back(n.id);
    }
    for (const auto& l : links) {
      adjacency[l.u].emplace_back(l.v, l.id);
      adjacency[l.v].emplace_back(l.u, l.id);
      pair_index_[pair_key(l.u, l.v)] = l.id;
    }
    for (auto& a : adjacency) std::sort(a.begin(), a.end());
  }

  // Undirected lookup: (u,v) and (v,u) resolve to the same record.
  const SubstrateLink* find_link(NodeId a, NodeId b) const {
    auto it = pair_index_.find(pair_key(a, b));
    return it == pair_index_.end() ? nullptr : &links[it->second];
  }

  // FNV-1a over the exact residual bit patterns; used by atomicity audits.
  std::uint64_t residual_hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto eat = [&h](double d) {
      std::uint64_t bits;
      static_assert(sizeof(bits) == sizeof(d));
      std::memcpy(&bits, &d, sizeof(bits));
      for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xffULL;
        h *= 1099511628211ULL;
      }
    };
    for (const auto& n : nodes) eat(n.cpu_residual);
    for (const auto& l : links) eat(l.bw_residual);
    return h;
  }

 private:
  static std::uint64_t pair_key(NodeId a, NodeId b) {
    auto lo = static_cast<std::uint64_t>(std::min(a, b));
    auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (hi << 32) | lo;
  }
  std::unordered_map<std::uint64_t, LinkId> pair_index_;
};

// ---------------------------------------------------------------------------
// Virtual network request model
// ---------------------------------------------------------------------------

struct VirtualNode {
  int id = -1;
  double cpu_demand = 0;
  std::vector<DomainId> candidate_domains;  // sorted, no duplicates
};

struct VirtualLink {
  int id = -1;
  int a = -1;
  int b = -1;
  double bw_demand = 0;
};

struct VirtualNetworkRequest {
  int id = -1;
  std::vector<VirtualNode> nodes;  // index == id
  std::vector<VirtualLink> links;  // index == id
  double arrival_time = 0;
  double lifetime = 0;
};

// ---------------------------------------------------------------------------
// Generator configuration (defaults follow the evaluation setup)
// ---------------------------------------------------------------------------

struct GeneratorConfig {
  int domains = 4;
  int nodes_per_domain = 30;
  int boundary_per_domain = 2;
  double cpu_min = 100, cpu_max = 300;
  int node_price_min = 1, node_price_max = 10;
  double intra_bw_min = 1000, intra_bw_max = 3000;
  int intra_price_min = 1, intra_price_max = 10;
  double intra_delay_min = 1, intra_delay_max = 10;
  double edge_prob = 0.5;
  double inter_bw_min = 1000, inter_bw_max = 3000;
  int inter_price_min = 5, inter_price_max = 15;
  double inter_delay_min = 10, inter_delay_max = 30;
  double extra_inter_link_prob = 0.5;
  int max_connect_attempts = 1000;
};

struct VnrConfig {
  int node_count = 4;
  int candidate_domain_count = 2;
  int substrate_domains = 4;
  double cpu_demand_min = 1, cpu_demand_max = 10;
  double bw_demand_min = 1, bw_demand_max = 10;
  double edge_prob = 0.5;
  double mean_lifetime = 500;
  int max_connect_attempts = 1000;
};

// ---------------------------------------------------------------------------
// Embedding result (self-contained: carries the demands it consumes, so the
// ledger can apply and invert it without the originating VNR)
// ---------------------------------------------------------------------------

struct SubstratePath {
  std::vector<NodeId> nodes;  // node sequence; empty for a trivial path
  std::vector<LinkId> links;  // links[i] joins nodes[i], nodes[i+1]
  double bottleneck_bw = kInfinity;
  double total_price = 0;  // sum of member link unit prices
  double total_delay = 0;

  int hops() const { return static_cast<int>(links.size()); }
};

enum class RejectReason {
  None,
  NoFeasibleCandidate,
  PremappingFailed,
  NoFeasiblePath,
  ConstraintViolation,
  InsufficientResources,
};

inline const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::None: return "none";
    case RejectReason::NoFeasibleCandidate: return "no-feasible-candidate";
    case RejectReason::PremappingFailed: return "premapping-failed";
    case RejectReason::NoFeasiblePath: return "no-feasible-path";
    case RejectReason::ConstraintViolation: return "constraint-violation";
    case RejectReason::InsufficientResources: return "insufficient-resources";
  }
  return "unknown";
}

struct NodeMapEntry {
  int vnode = -1;
  NodeId snode = -1;
  double cpu_demand = 0;
};

struct LinkMapEntry {
  int vlink = -1;
  double bw_demand = 0;
  SubstratePath path;
};

// One intra-domain link pick, recorded at selection time. The threshold
// audit and the per-domain selected-bandwidth measurements both read these.
struct SelectedLinkRecord {
  LinkId link = -1;
  DomainId domain = -1;
  double residual_at_selection = 0;
  double threshold_at_selection = 0;
};

struct EmbeddingResult {
  int vnr_id = -1;
  bool accepted = false;
  RejectReason reason = RejectReason::None;
  std::vector<NodeMapEntry> nodes;  // sorted by vnode id
  std::vector<LinkMapEntry> links;  // sorted by vlink id
  double cost = 0;
  double total_delay = 0;
  std::vector<SelectedLinkRecord> selected_links;
  std::vector<double> premap_trace;  // global-best fitness per iteration, if traced

  const NodeMapEntry* find_node(int vnode) const {
    for (const auto& e : nodes)
      if (e.vnode == vnode) return &e;
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct GenerationError : std::runtime_error {
  int attempts;
  explicit GenerationError(const std::string& what, int attempts_)
      : std::runtime_error(what), attempts(attempts_) {}
};

struct InsufficientResources : std::runtime_error {
  bool is_node;  // else link
  int id;
  InsufficientResources(bool is_node_, int id_)
      : std::runtime_error(std::string("insufficient resources on ") +
                           (is_node_ ? "node " : "link ") + std::to_string(id_)),
        is_node(is_node_),
        id(id_) {}
};

struct DoubleRelease : std::runtime_error {
  int vnr_id;
  explicit DoubleRelease(int vnr_id_)
      : std::runtime_error("release of unknown embedding " + std::to_string(vnr_id_)),
        vnr_id(vnr_id_) {}
};

struct NoFeasibleCandidate : std::runtime_error {
  int virtual_node;
  explicit NoFeasibleCandidate(int vnode)
      : std::runtime_error("virtual node " + std::to_string(vnode) +
                           " has no feasible candidate"),
        virtual_node(vnode) {}
};

struct PremappingFailed : std::runtime_error {
  PremappingFailed() : std::runtime_error("premapping found no feasible scheme") {}
};

struct DisconnectedGlobalView : std::runtime_error {
  DisconnectedGlobalView() : std::runtime_error("global candidate network is disconnected") {}
};

struct NoSamples : std::runtime_error {
  NoSamples() : std::runtime_error("no samples recorded") {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bavne
