#include "clsc/mincostflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace clsc {

namespace {
constexpr double kResidualEps = 1e-9;   // residual capacity below this is saturated
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

MinCostFlow::MinCostFlow(std::size_t num_nodes) : graph_(num_nodes), supply_(num_nodes, 0.0) {}

std::size_t MinCostFlow::add_node() {
  graph_.emplace_back();
  supply_.push_back(0.0);
  return graph_.size() - 1;
}

std::size_t MinCostFlow::add_arc(std::size_t from, std::size_t to, double capacity,
                                 double unit_cost) {
  Edge fwd{to, capacity, unit_cost, graph_[to].size()};
  Edge rev{from, 0.0, -unit_cost, graph_[from].size()};
  graph_[from].push_back(fwd);
  graph_[to].push_back(rev);
  arc_refs_.emplace_back(from, graph_[from].size() - 1);
  return arc_refs_.size() - 1;
}

void MinCostFlow::set_supply(std::size_t node, double supply) { supply_[node] = supply; }

void MinCostFlow::bellman_ford_potentials(std::size_t source) {
  const std::size_t n = graph_.size();
  std::vector<double> dist(n, kInf);
  dist[source] = 0.0;
  for (std::size_t round = 0; round + 1 < n; ++round) {
    bool changed = false;
    for (std::size_t u = 0; u < n; ++u) {
      if (dist[u] == kInf) continue;
      for (const Edge& e : graph_[u])
        if (e.capacity > kResidualEps && dist[u] + e.cost < dist[e.to]) {
          dist[e.to] = dist[u] + e.cost;
          changed = true;
        }
    }
    if (!changed) break;
  }
  for (std::size_t u = 0; u < n; ++u) potential_[u] = (dist[u] == kInf) ? 0.0 : dist[u];
}

bool MinCostFlow::dijkstra(std::size_t source, std::vector<double>& dist,
                           std::vector<std::pair<std::size_t, std::size_t>>& parent) const {
  const std::size_t n = graph_.size();
  dist.assign(n, kInf);
  parent.assign(n, {n, n});
  dist[source] = 0.0;
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (std::size_t idx = 0; idx < graph_[u].size(); ++idx) {
      const Edge& e = graph_[u][idx];
      if (e.capacity <= kResidualEps) continue;
      // Reduced cost is non-negative up to rounding; clamp the noise.
      double rc = std::max(0.0, e.cost + potential_[u] - potential_[e.to]);
      if (dist[u] + rc < dist[e.to]) {
        dist[e.to] = dist[u] + rc;
        parent[e.to] = {u, idx};
        heap.push({dist[e.to], e.to});
      }
    }
  }
  return true;
}

bool MinCostFlow::solve() {
  const std::size_t n_before = graph_.size();
  double total_supply = 0.0;
  std::size_t source = add_node();
  std::size_t sink = add_node();
  for (std::size_t u = 0; u < n_before; ++u) {
    if (supply_[u] > 0.0) {
      add_arc(source, u, supply_[u], 0.0);
      total_supply += supply_[u];
    } else if (supply_[u] < 0.0) {
      add_arc(u, sink, -supply_[u], 0.0);
    }
  }

  potential_.assign(graph_.size(), 0.0);
  bellman_ford_potentials(source);

  double routed = 0.0;
  const double target_tol = 1e-7 * std::max(1.0, total_supply);
  std::vector<double> dist;
  std::vector<std::pair<std::size_t, std::size_t>> parent;
  while (total_supply - routed > target_tol) {
    dijkstra(source, dist, parent);
    if (dist[sink] == kInf) break;

    double bottleneck = total_supply - routed;
    for (std::size_t v = sink; v != source;) {
      auto [u, idx] = parent[v];
      bottleneck = std::min(bottleneck, graph_[u][idx].capacity);
      v = u;
    }
    if (bottleneck <= kResidualEps) break;
    for (std::size_t v = sink; v != source;) {
      auto [u, idx] = parent[v];
      Edge& e = graph_[u][idx];
      e.capacity -= bottleneck;
      graph_[e.to][e.reverse].capacity += bottleneck;
      v = u;
    }
    routed += bottleneck;
    for (std::size_t u = 0; u < graph_.size(); ++u)
      if (dist[u] != kInf) potential_[u] += dist[u];
  }

  // Cost accounting from final flows, independent of path bookkeeping.
  total_cost_ = 0.0;
  for (std::size_t a = 0; a < arc_refs_.size(); ++a) total_cost_ += flow(a) * arc_cost(a);
  return total_supply - routed <= target_tol;
}

double MinCostFlow::flow(std::size_t arc_id) const {
  // The paired reverse edge accumulates exactly the pushed flow starting
  // from zero, so it keeps full precision even when the forward capacity is
  // a huge sentinel whose ulp exceeds the flow.
  auto [node, idx] = arc_refs_[arc_id];
  const Edge& fwd = graph_[node][idx];
  double f = graph_[fwd.to][fwd.reverse].capacity;
  return (std::abs(f) < kResidualEps) ? 0.0 : f;
}

double MinCostFlow::arc_cost(std::size_t arc_id) const {
  auto [node, idx] = arc_refs_[arc_id];
  return graph_[node][idx].cost;
}

Mat min_cost_flow(const std::vector<double>& supplies, const std::vector<double>& demands,
                  const Mat& capacities, const Mat& arc_costs) {
  const std::size_t ns = supplies.size(), nd = demands.size();
  if (capacities.rows() != ns || capacities.cols() != nd || arc_costs.rows() != ns ||
      arc_costs.cols() != nd)
    throw std::invalid_argument("min_cost_flow: matrix shape mismatch");
  double ts = 0.0, td = 0.0;
  for (double s : supplies) ts += s;
  for (double d : demands) td += d;
  if (std::abs(ts - td) > 1e-6 * std::max(1.0, std::max(ts, td)))
    throw std::invalid_argument("min_cost_flow: supplies and demands do not balance");

  MinCostFlow net(ns + nd);
  std::vector<std::vector<std::size_t>> arc_ids(ns, std::vector<std::size_t>(nd));
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = 0; j < nd; ++j)
      arc_ids[i][j] = net.add_arc(i, ns + j, capacities(i, j), arc_costs(i, j));
  for (std::size_t i = 0; i < ns; ++i) net.set_supply(i, supplies[i]);
  for (std::size_t j = 0; j < nd; ++j) net.set_supply(ns + j, -demands[j]);

  if (!net.solve())
    throw InfeasibleFlowError("min_cost_flow: demand exceeds reachable capacity");

  Mat flows(ns, nd);
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = 0; j < nd; ++j) flows(i, j) = net.flow(arc_ids[i][j]);
  return flows;
}

}  // namespace clsc
