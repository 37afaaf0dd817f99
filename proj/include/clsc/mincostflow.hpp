#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "clsc/core.hpp"

namespace clsc {

class InfeasibleFlowError : public std::runtime_error {
 public:
  explicit InfeasibleFlowError(const std::string& what) : std::runtime_error(what) {}
};

/// Minimum-cost flow on a directed graph with real-valued capacities and
/// costs. Successive shortest augmenting paths with node potentials; initial
/// potentials come from Bellman-Ford so negative arc costs are admitted
/// (negative cycles are not).
///
/// Usage: add nodes/arcs, set node supplies (positive) and demands
/// (negative), then solve(). Supplies must balance demands.
class MinCostFlow {
 public:
  explicit MinCostFlow(std::size_t num_nodes);

  std::size_t add_node();

  /// Returns an arc id usable with flow() after solve().
  std::size_t add_arc(std::size_t from, std::size_t to, double capacity, double unit_cost);

  void set_supply(std::size_t node, double supply);  // negative = demand

  /// Routes all supplies to demands at minimum cost. Returns false when the
  /// network cannot carry the required flow.
  bool solve();

  double flow(std::size_t arc_id) const;
  double arc_cost(std::size_t arc_id) const;
  double total_cost() const { return total_cost_; }

 private:
  struct Edge {
    std::size_t to;
    double capacity;  // residual
    double cost;
    std::size_t reverse;  // index of the paired reverse edge in graph_[to]
  };

  bool has_negative_arc() const;
  void bellman_ford_potentials(std::size_t source);
  bool dijkstra(std::size_t source, std::vector<double>& dist,
                std::vector<std::pair<std::size_t, std::size_t>>& parent) const;

  std::vector<std::vector<Edge>> graph_;
  std::vector<std::pair<std::size_t, std::size_t>> arc_refs_;  // node, edge index
  std::vector<double> supply_;
  std::vector<double> potential_;
  double total_cost_ = 0.0;
};

/// Transportation problem: route supplies to demands over a dense bipartite
/// network. supplies and demands must balance within 1e-6. Arc capacities and
/// costs are supplies.size() x demands.size(). Throws InfeasibleFlowError
/// when no feasible routing exists. Costs may be negative.
Mat min_cost_flow(const std::vector<double>& supplies, const std::vector<double>& demands,
                  const Mat& capacities, const Mat& arc_costs);

}  // namespace clsc
