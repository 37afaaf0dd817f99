#include "clsc/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace clsc {

std::array<double, 3> canonicalize(const ObjectiveVector& v) {
  return {v.total_cost, v.total_co2, -v.expected_dispatch};
}

bool dominates_min(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  bool strict = false;
  for (int o = 0; o < 3; ++o) {
    if (a[o] > b[o]) return false;
    if (a[o] < b[o]) strict = true;
  }
  return strict;
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  return dominates_min(canonicalize(a), canonicalize(b));
}

bool weakly_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  auto ca = canonicalize(a), cb = canonicalize(b);
  for (int o = 0; o < 3; ++o)
    if (ca[o] > cb[o]) return false;
  return true;
}

std::vector<std::size_t> nondominated_indices(const std::vector<ObjectiveVector>& points) {
  std::vector<std::array<double, 3>> canon(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) canon[i] = canonicalize(points[i]);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j)
      if (j != i && dominates_min(canon[j], canon[i])) dominated = true;
    if (!dominated) out.push_back(i);
  }
  return out;
}

NondominatedSort fast_nondominated_sort(const std::vector<ObjectiveVector>& points) {
  const std::size_t n = points.size();
  std::vector<std::array<double, 3>> canon(n);
  for (std::size_t i = 0; i < n; ++i) canon[i] = canonicalize(points[i]);

  std::vector<std::vector<std::size_t>> dominated_by(n);
  std::vector<int> domination_count(n, 0);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      if (dominates_min(canon[p], canon[q]))
        dominated_by[p].push_back(q);
      else if (dominates_min(canon[q], canon[p]))
        ++domination_count[p];
    }

  NondominatedSort result;
  result.rank.assign(n, -1);
  std::vector<std::size_t> current;
  for (std::size_t p = 0; p < n; ++p)
    if (domination_count[p] == 0) {
      result.rank[p] = 0;
      current.push_back(p);
    }
  int r = 0;
  while (!current.empty()) {
    result.fronts.push_back(current);
    std::vector<std::size_t> next;
    for (std::size_t p : current)
      for (std::size_t q : dominated_by[p])
        if (--domination_count[q] == 0) {
          result.rank[q] = r + 1;
          next.push_back(q);
        }
    current = std::move(next);
    ++r;
  }
  return result;
}

std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front) {
  const std::size_t n = front.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, 0.0);
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), inf);
    return dist;
  }
  std::vector<std::array<double, 3>> canon(n);
  for (std::size_t i = 0; i < n; ++i) canon[i] = canonicalize(front[i]);

  for (int o = 0; o < 3; ++o) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return canon[a][o] < canon[b][o]; });
    double lo = canon[order.front()][o], hi = canon[order.back()][o];
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    double range = hi - lo;
    if (range <= 0.0) continue;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      std::size_t idx = order[i];
      if (dist[idx] == inf) continue;
      dist[idx] += (canon[order[i + 1]][o] - canon[order[i - 1]][o]) / range;
    }
  }
  return dist;
}

namespace {

// Area of the region dominated (min-min) by the given 2-D points within the
// rectangle bounded by (rx, ry).
double staircase_area(std::vector<std::array<double, 2>> pts, double rx, double ry) {
  if (pts.empty()) return 0.0;
  std::sort(pts.begin(), pts.end());
  // Keep the 2-D non-dominated staircase: ascending x, strictly descending y.
  std::vector<std::array<double, 2>> stair;
  double best_y = std::numeric_limits<double>::infinity();
  for (const auto& p : pts)
    if (p[1] < best_y) {
      stair.push_back(p);
      best_y = p[1];
    }
  double area = 0.0, prev_y = ry;
  for (const auto& p : stair) {
    area += (rx - p[0]) * (prev_y - p[1]);
    prev_y = p[1];
  }
  return area;
}

double hv3d(std::vector<std::array<double, 3>> pts, const std::array<double, 3>& ref) {
  if (pts.empty()) return 0.0;
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a[2] < b[2]; });
  double volume = 0.0;
  for (std::size_t i = 0; i < pts.size();) {
    std::size_t j = i;
    while (j < pts.size() && pts[j][2] == pts[i][2]) ++j;
    double z_lo = pts[i][2];
    double z_hi = (j < pts.size()) ? pts[j][2] : ref[2];
    if (z_hi > z_lo) {
      std::vector<std::array<double, 2>> slice;
      slice.reserve(j);
      for (std::size_t t = 0; t < j; ++t) slice.push_back({pts[t][0], pts[t][1]});
      volume += staircase_area(std::move(slice), ref[0], ref[1]) * (z_hi - z_lo);
    }
    i = j;
  }
  return volume;
}

}  // namespace

double hypervolume(const std::vector<std::array<double, 3>>& canonical_points,
                   const std::array<double, 3>& reference) {
  for (const auto& p : canonical_points)
    for (int o = 0; o < 3; ++o)
      if (!(p[o] < reference[o]))
        throw std::invalid_argument("hypervolume: point does not strictly dominate reference");
  return hv3d(canonical_points, reference);
}

double hypervolume(const std::vector<ObjectiveVector>& points,
                   const std::array<double, 3>& canonical_reference) {
  std::vector<std::array<double, 3>> canon(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) canon[i] = canonicalize(points[i]);
  return hypervolume(canon, canonical_reference);
}

double hypervolume_clipped(const std::vector<ObjectiveVector>& points,
                           const std::array<double, 3>& canonical_reference) {
  std::vector<std::array<double, 3>> inside;
  inside.reserve(points.size());
  for (const auto& p : points) {
    auto c = canonicalize(p);
    if (c[0] < canonical_reference[0] && c[1] < canonical_reference[1] &&
        c[2] < canonical_reference[2])
      inside.push_back(c);
  }
  return hv3d(std::move(inside), canonical_reference);
}

double coverage(const std::vector<ObjectiveVector>& a, const std::vector<ObjectiveVector>& b) {
  if (b.empty()) throw std::invalid_argument("coverage: front B is empty");
  std::size_t covered = 0;
  for (const auto& q : b)
    for (const auto& p : a)
      if (weakly_dominates(p, q)) {
        ++covered;
        break;
      }
  return static_cast<double>(covered) / static_cast<double>(b.size());
}

bool ParetoFront::add(FrontPoint point) {
  auto c = canonicalize(point.objectives);
  for (auto& existing : points_) {
    auto ce = canonicalize(existing.objectives);
    if (ce == c) {
      existing.provenance.insert(existing.provenance.end(), point.provenance.begin(),
                                 point.provenance.end());
      return false;
    }
    if (dominates_min(ce, c)) return false;
  }
  std::erase_if(points_, [&](const FrontPoint& existing) {
    return dominates_min(c, canonicalize(existing.objectives));
  });
  points_.push_back(std::move(point));
  return true;
}

std::vector<ObjectiveVector> ParetoFront::objectives() const {
  std::vector<ObjectiveVector> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.objectives);
  return out;
}

void ParetoFront::sort_canonical() {
  std::stable_sort(points_.begin(), points_.end(), [](const FrontPoint& a, const FrontPoint& b) {
    return canonicalize(a.objectives) < canonicalize(b.objectives);
  });
}

ParetoFront ParetoFront::merged(const ParetoFront& a, const ParetoFront& b) {
  ParetoFront out;
  for (const auto& p : a.points()) out.add(p);
  for (const auto& p : b.points()) out.add(p);
  return out;
}

}  // namespace clsc
