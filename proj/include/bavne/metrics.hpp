#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "bavne/types.hpp"

namespace bavne {

// Comprehensive mapping cost: CPU demand times node unit price summed over
// virtual nodes, plus bandwidth demand times the summed unit prices of the
// hosting path summed over virtual links. Real (non-aggregated) prices.
inline double embedding_cost(const EmbeddingResult& result, const SubstrateNetwork& net) {
  double total = 0;
  for (const auto& e : result.nodes) total += e.cpu_demand * net.nodes[e.snode].cpu_price;
  for (const auto& e : result.links) {
    double path_price = 0;
    for (LinkId l : e.path.links) path_price += net.links[l].bw_price;
    total += e.bw_demand * path_price;
  }
  return total;
}

class MetricsAccumulator {
 public:
  explicit MetricsAccumulator(int total_substrate_links = 0)
      : total_substrate_links_(total_substrate_links) {}

  void on_embedded(const EmbeddingResult& result) {
    ++total_count_;
    if (!result.accepted) return;
    ++accepted_count_;
    cost_samples_.push_back(result.cost);
    delay_samples_.push_back(result.total_delay);
    for (const auto& rec : result.selected_links) {
      selected_bw_by_domain_[rec.domain].push_back(rec.residual_at_selection);
      if (rec.residual_at_selection < rec.threshold_at_selection) ++threshold_breaches_;
    }
    for (const auto& e : result.links)
      for (LinkId l : e.path.links) ++active_links_[l];
  }

  void on_released(const EmbeddingResult& result) {
    for (const auto& e : result.links) {
      for (LinkId l : e.path.links) {
        auto it = active_links_.find(l);
        if (it != active_links_.end() && --it->second == 0) active_links_.erase(it);
      }
    }
  }

  // accepted / arrived; empty workload has no defined rate
  std::optional<double> acceptance_rate() const {
    if (total_count_ == 0) return std::nullopt;
    return static_cast<double>(accepted_count_) / static_cast<double>(total_count_);
  }

  // fraction of substrate links carrying at least one active embedding
  double link_utilization() const {
    if (total_substrate_links_ == 0) return 0;
    return static_cast<double>(active_links_.size()) /
           static_cast<double>(total_substrate_links_);
  }

  double average_selected_bandwidth(DomainId domain) const {
    auto it = selected_bw_by_domain_.find(domain);
    if (it == selected_bw_by_domain_.end() || it->second.empty()) throw NoSamples();
    double sum = 0;
    for (double b : it->second) sum += b;
    return sum / static_cast<double>(it->second.size());
  }

  double average_embedding_delay() const {
    if (delay_samples_.empty()) throw NoSamples();
    double sum = 0;
    for (double d : delay_samples_) sum += d;
    return sum / static_cast<double>(delay_samples_.size());
  }

  double average_cost() const {
    if (cost_samples_.empty()) throw NoSamples();
    double sum = 0;
    for (double c : cost_samples_) sum += c;
    return sum / static_cast<double>(cost_samples_.size());
  }

  double total_cost() const {
    double sum = 0;
    for (double c : cost_samples_) sum += c;
    return sum;
  }

  long long accepted_count() const { return accepted_count_; }
  long long total_count() const { return total_count_; }
  long long threshold_breaches() const { return threshold_breaches_; }
  int total_substrate_links() const { return total_substrate_links_; }
  const std::vector<double>& cost_samples() const { return cost_samples_; }
  const std::vector<double>& delay_samples() const { return delay_samples_; }
  const std::map<DomainId, std::vector<double>>& selected_bandwidth_samples() const {
    return selected_bw_by_domain_;
  }
  std::size_t active_link_count() const { return active_links_.size(); }

 private:
  int total_substrate_links_ = 0;
  long long accepted_count_ = 0;
  long long total_count_ = 0;
  long long threshold_breaches_ = 0;
  std::vector<double> cost_samples_;
  std::vector<double> delay_samples_;
  std::map<DomainId, std::vector<double>> selected_bw_by_domain_;
  std::map<LinkId, int> active_links_;  // link -> active embedding count
};

}  // namespace bavne
