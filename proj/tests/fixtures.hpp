// Hand-built networks used across the test suites.
#pragma once

#include <vector>

#include "bavne/types.hpp"

namespace fixtures {

using namespace bavne;

struct NodeSpec {
  DomainId domain = 0;
  bool boundary = false;
  double cpu = 100;
  double price = 1;
};

struct LinkSpec {
  NodeId u = 0, v = 0;
  double bw = 0;
  double price = 1;
  double delay = 1;
};

inline SubstrateNetwork make_network(int domains, const std::vector<NodeSpec>& nodes,
                                     const std::vector<LinkSpec>& links) {
  SubstrateNetwork net;
  net.domain_count = domains;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    SubstrateNode n;
    n.id = static_cast<NodeId>(i);
    n.domain = nodes[i].domain;
    n.is_boundary = nodes[i].boundary;
    n.cpu_capacity = n.cpu_residual = nodes[i].cpu;
    n.cpu_price = nodes[i].price;
    net.nodes.push_back(n);
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    SubstrateLink l;
    l.id = static_cast<LinkId>(i);
    l.u = links[i].u;
    l.v = links[i].v;
    DomainId du = net.nodes[l.u].domain, dv = net.nodes[l.v].domain;
    l.kind = du == dv ? LinkKind::Intra : LinkKind::Inter;
    l.domain = du == dv ? du : -1;
    l.bw_capacity = l.bw_residual = links[i].bw;
    l.bw_price = links[i].price;
    l.delay = links[i].delay;
    net.links.push_back(l);
  }
  net.rebuild_index();
  return net;
}

// Worked selection example: interior B linked to boundary C (bw 10) and
// boundary D (bw 7), boundary-boundary link C-D (bw 10). Domain mean is 9.
// Node ids: B=0, C=1, D=2.
inline SubstrateNetwork selection_example() {
  return make_network(1,
                      {{0, false, 200, 1}, {0, true, 200, 1}, {0, true, 200, 1}},
                      {{0, 1, 10, 1, 1}, {1, 2, 10, 1, 1}, {0, 2, 7, 1, 1}});
}

// Aggregation example: two interior-boundary links of bandwidth 4 (price 2)
// and 6 (price 5) merging into one aggregated link of bandwidth 10.
// Node ids: interior A=0, interior X=1, boundary B=2.
inline SubstrateNetwork aggregation_example() {
  return make_network(1,
                      {{0, false, 200, 1}, {0, false, 200, 1}, {0, true, 200, 1}},
                      {{0, 2, 4, 2, 1}, {1, 2, 6, 5, 1}, {0, 1, 100, 1, 1}});
}

// Two small domains joined by one inter-domain link; plenty of everything.
// Domain 0: nodes 0 (boundary), 1, 2. Domain 1: nodes 3 (boundary), 4, 5.
inline SubstrateNetwork two_domain_toy() {
  return make_network(2,
                      {{0, true, 200, 2},
                       {0, false, 150, 3},
                       {0, false, 180, 1},
                       {1, true, 220, 2},
                       {1, false, 160, 4},
                       {1, false, 190, 1}},
                      {{0, 1, 1000, 2, 2},
                       {1, 2, 1200, 1, 3},
                       {0, 2, 900, 3, 1},
                       {3, 4, 1100, 2, 2},
                       {4, 5, 1000, 1, 4},
                       {3, 5, 950, 2, 2},
                       {0, 3, 2000, 6, 12}});
}

inline VirtualNetworkRequest simple_vnr(int id, std::vector<VirtualNode> nodes,
                                        std::vector<VirtualLink> links, double arrival = 0,
                                        double lifetime = 100) {
  VirtualNetworkRequest vnr;
  vnr.id = id;
  vnr.nodes = std::move(nodes);
  vnr.links = std::move(links);
  vnr.arrival_time = arrival;
  vnr.lifetime = lifetime;
  return vnr;
}

}  // namespace fixtures
