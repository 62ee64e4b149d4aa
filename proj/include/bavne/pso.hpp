#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "bavne/abstraction.hpp"
#include "bavne/rng.hpp"
#include "bavne/types.hpp"

namespace bavne {

struct PsoParams {
  int swarm_size = 20;
  int max_iterations = 50;
  double c1 = 1.5;  // cognitive learning factor
  double c2 = 1.5;  // social learning factor
  double mutation_rate = 0.05;
  std::uint64_t seed = 1;
};

// Per-virtual-node change intent: probability of adopting the personal-best
// or global-best component on the next position update. This is the discrete
// reading of the velocity recurrence: the difference terms are indicators
// (1 where the best differs from the current position), scaled by c*r and
// accumulated onto the carried velocity, clamped to [0,1].
struct VelocityTerm {
  double toward_pb = 0;
  double toward_gb = 0;
};

using Position = std::vector<NodeId>;  // virtual node index -> candidate node id

struct Particle {
  Position position;
  std::vector<VelocityTerm> velocity;
  Position personal_best;
  double personal_best_fitness = kInfinity;
  double fitness = kInfinity;
};

struct Swarm {
  std::vector<Particle> particles;
  Position global_best;
  double global_best_fitness = kInfinity;
  int iteration = 0;
};

// Candidate choices per virtual node, resolved once per premapping run.
struct CandidateSpace {
  // per virtual node: feasible candidates sorted by node id
  std::vector<std::vector<const CandidateNode*>> feasible;

  static CandidateSpace build(const GlobalCandidateNetwork& gcn,
                              const VirtualNetworkRequest& vnr) {
    CandidateSpace space;
    space.feasible.resize(vnr.nodes.size());
    for (const auto& vn : vnr.nodes) {
      auto& list = space.feasible[vn.id];
      for (DomainId d : vn.candidate_domains)
        for (const CandidateNode* c : gcn.feasible_candidates(d, vn.cpu_demand))
          list.push_back(c);
      std::sort(list.begin(), list.end(),
                [](const CandidateNode* a, const CandidateNode* b) { return a->node < b->node; });
      if (list.empty()) throw NoFeasibleCandidate(vn.id);
    }
    return space;
  }
};

// ---------------------------------------------------------------------------
// Pre-mapping fitness: forecast node cost (CPU demand x candidate unit price)
// plus each virtual link priced along the cheapest qualified route through
// the pseudo topology. An unroutable link makes the scheme worthless, which
// the infinity sentinel encodes.
// ---------------------------------------------------------------------------
class PremapCostFitness {
 public:
  PremapCostFitness(const GlobalCandidateNetwork& gcn, const VirtualNetworkRequest& vnr)
      : gcn_(&gcn), vnr_(&vnr) {
    for (const auto& view : gcn.views)
      for (const auto& c : view.candidate_nodes) price_[c.node] = c.cpu_price;
  }

  double operator()(const Position& pos) const {
    double total = 0;
    for (const auto& vn : vnr_->nodes) total += vn.cpu_demand * price_.at(pos[vn.id]);
    for (const auto& vl : vnr_->links) {
      auto route = routed(pos[vl.a], pos[vl.b], vl.id, vl.bw_demand);
      if (!route) return kInfinity;
      total += vl.bw_demand * route->price;
    }
    return total;
  }

 private:
  std::optional<GcnRoute> routed(NodeId u, NodeId v, int vlink, double demand) const {
    auto key = std::make_tuple(std::min(u, v), std::max(u, v), vlink);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    auto route = gcn_cheapest_route(*gcn_, u, v, demand);
    memo_.emplace(key, route);
    return route;
  }

  const GlobalCandidateNetwork* gcn_;
  const VirtualNetworkRequest* vnr_;
  std::map<NodeId, double> price_;
  mutable std::map<std::tuple<NodeId, NodeId, int>, std::optional<GcnRoute>> memo_;
};

// Free-function form of the default fitness (no memo reuse across calls).
inline double premap_fitness(const Position& pos, const GlobalCandidateNetwork& gcn,
                             const VirtualNetworkRequest& vnr) {
  return PremapCostFitness(gcn, vnr)(pos);
}

namespace detail {

constexpr int kRepairRetries = 20;

// Draw an unused candidate for virtual node k: bounded uniform retries over
// the feasible list, then a deterministic scan fallback. Returns -1 when the
// node genuinely has no unused feasible candidate left.
inline NodeId draw_unused(const std::vector<const CandidateNode*>& feasible,
                          const std::set<NodeId>& used, Rng& rng) {
  for (int t = 0; t < kRepairRetries; ++t) {
    NodeId pick = feasible[rng.index(feasible.size())]->node;
    if (!used.count(pick)) return pick;
  }
  for (const CandidateNode* c : feasible)
    if (!used.count(c->node)) return c->node;
  return -1;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Swarm construction: positions drawn uniformly from each node's feasible
// candidates, kept injective by bounded resampling. A particle that cannot
// be made injective keeps the infinity sentinel.
// ---------------------------------------------------------------------------
template <class Fitness>
inline Swarm init_swarm(const CandidateSpace& space, const VirtualNetworkRequest& vnr,
                        const PsoParams& params, Fitness&& fitness) {
  Swarm swarm;
  swarm.particles.resize(static_cast<std::size_t>(params.swarm_size));
  Rng root(params.seed);
  for (int i = 0; i < params.swarm_size; ++i) {
    auto& p = swarm.particles[i];
    Rng rng = root.derive(static_cast<std::uint64_t>(i));
    p.position.assign(vnr.nodes.size(), -1);
    p.velocity.resize(vnr.nodes.size());
    std::set<NodeId> used;
    bool ok = true;
    for (std::size_t k = 0; k < vnr.nodes.size(); ++k) {
      NodeId pick = detail::draw_unused(space.feasible[k], used, rng);
      if (pick < 0) {
        ok = false;
        break;
      }
      p.position[k] = pick;
      used.insert(pick);
    }
    for (auto& v : p.velocity) {
      v.toward_pb = rng.uniform01();
      v.toward_gb = rng.uniform01();
    }
    p.fitness = ok ? fitness(p.position) : kInfinity;
    p.personal_best = p.position;
    p.personal_best_fitness = p.fitness;
    if (p.fitness < swarm.global_best_fitness) {
      swarm.global_best = p.position;
      swarm.global_best_fitness = p.fitness;
    }
  }
  if (swarm.global_best.empty() && !swarm.particles.empty())
    swarm.global_best = swarm.particles.front().position;
  return swarm;
}

template <class Fitness>
inline Swarm init_swarm(const GlobalCandidateNetwork& gcn, const VirtualNetworkRequest& vnr,
                        const PsoParams& params, Fitness&& fitness) {
  return init_swarm(CandidateSpace::build(gcn, vnr), vnr, params, fitness);
}

// Velocity recurrence with indicator-valued difference terms and fresh
// r1, r2 per update.
inline void update_velocity(Particle& p, const Position& global_best, const PsoParams& params,
                            Rng& rng) {
  double r1 = rng.uniform01();
  double r2 = rng.uniform01();
  for (std::size_t k = 0; k < p.position.size(); ++k) {
    double pb_diff = p.personal_best[k] != p.position[k] ? 1.0 : 0.0;
    double gb_diff = global_best[k] != p.position[k] ? 1.0 : 0.0;
    auto& v = p.velocity[k];
    v.toward_pb = std::clamp(v.toward_pb + params.c1 * r1 * pb_diff, 0.0, 1.0);
    v.toward_gb = std::clamp(v.toward_gb + params.c2 * r2 * gb_diff, 0.0, 1.0);
  }
}

// Position update: probabilistic adoption of the best components (global
// best checked second, so it wins a double fire), then the mutation factor,
// then collision repair. A particle whose repair budget runs out keeps its
// previous feasible position.
inline void update_position(Particle& p, const Position& global_best, const PsoParams& params,
                            const CandidateSpace& space, Rng& rng) {
  Position previous = p.position;
  for (std::size_t k = 0; k < p.position.size(); ++k) {
    if (rng.coin(p.velocity[k].toward_pb)) p.position[k] = p.personal_best[k];
    if (rng.coin(p.velocity[k].toward_gb) && global_best[k] >= 0) p.position[k] = global_best[k];
    if (rng.coin(params.mutation_rate)) {
      const auto& list = space.feasible[k];
      p.position[k] = list[rng.index(list.size())]->node;
    }
  }
  std::set<NodeId> used;
  for (std::size_t k = 0; k < p.position.size(); ++k) {
    if (!used.count(p.position[k])) {
      used.insert(p.position[k]);
      continue;
    }
    NodeId pick = detail::draw_unused(space.feasible[k], used, rng);
    if (pick < 0) {
      p.position = previous;
      return;
    }
    p.position[k] = pick;
    used.insert(pick);
  }
}

struct PremapResult {
  Position position;
  double fitness = kInfinity;
  std::vector<double> trace;  // global-best fitness after init and per iteration
};

// ---------------------------------------------------------------------------
// Pre-mapping driver. Per iteration and particle: position update, velocity
// update, personal-best refresh on improvement, global-best refresh from the
// personal best. Each particle owns a seed-derived stream, so the result is
// independent of evaluation interleaving.
// ---------------------------------------------------------------------------
template <class Fitness>
inline PremapResult run_premapping(const GlobalCandidateNetwork& gcn,
                                   const VirtualNetworkRequest& vnr, const PsoParams& params,
                                   Fitness&& fitness) {
  if (params.swarm_size < 1) throw ConfigError("swarm_size must be >= 1");
  CandidateSpace space = CandidateSpace::build(gcn, vnr);
  Swarm swarm = init_swarm(space, vnr, params, fitness);

  Rng root(params.seed);
  std::vector<Rng> streams;
  streams.reserve(swarm.particles.size());
  for (std::size_t i = 0; i < swarm.particles.size(); ++i)
    streams.push_back(root.derive(0x9000 + i));

  PremapResult result;
  result.trace.push_back(swarm.global_best_fitness);
  for (swarm.iteration = 0; swarm.iteration < params.max_iterations; ++swarm.iteration) {
    for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
      auto& p = swarm.particles[i];
      // a particle that could not be initialized injectively stays inert
      if (std::find(p.position.begin(), p.position.end(), -1) != p.position.end()) continue;
      update_position(p, swarm.global_best, params, space, streams[i]);
      update_velocity(p, swarm.global_best, params, streams[i]);
      p.fitness = fitness(p.position);
      if (p.fitness < p.personal_best_fitness) {
        p.personal_best = p.position;
        p.personal_best_fitness = p.fitness;
      }
      if (p.personal_best_fitness < swarm.global_best_fitness) {
        swarm.global_best = p.personal_best;
        swarm.global_best_fitness = p.personal_best_fitness;
      }
    }
    result.trace.push_back(swarm.global_best_fitness);
  }
  if (swarm.global_best_fitness == kInfinity) throw PremappingFailed();
  result.position = swarm.global_best;
  result.fitness = swarm.global_best_fitness;
  return result;
}

inline PremapResult run_premapping(const GlobalCandidateNetwork& gcn,
                                   const VirtualNetworkRequest& vnr, const PsoParams& params) {
  return run_premapping(gcn, vnr, params, PremapCostFitness(gcn, vnr));
}

}  // namespace bavne
