#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "clsc/model.hpp"

namespace clsc {

/// Minimization form of an objective vector: (cost, co2, -dispatch).
std::array<double, 3> canonicalize(const ObjectiveVector& v);

/// True iff a is no worse than b in every objective and strictly better in at
/// least one, under the (min, min, max) orientation.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// True iff a is no worse than b in every objective.
bool weakly_dominates(const ObjectiveVector& a, const ObjectiveVector& b);

bool dominates_min(const std::array<double, 3>& a, const std::array<double, 3>& b);

/// Indices of points not dominated by any other point.
std::vector<std::size_t> nondominated_indices(const std::vector<ObjectiveVector>& points);

struct NondominatedSort {
  std::vector<int> rank;                          // per point
  std::vector<std::vector<std::size_t>> fronts;   // rank r -> point indices
};

/// NSGA-II fast non-dominated sort: rank 0 is the non-dominated set, rank r
/// the non-dominated set after removing ranks < r.
NondominatedSort fast_nondominated_sort(const std::vector<ObjectiveVector>& points);

/// Crowding distances over one mutually non-dominated front. Distances are
/// sums of normalized nearest-neighbor gaps per canonical objective; boundary
/// points get +infinity.
std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front);

/// Exact 3-D hypervolume dominated by canonical points and bounded by the
/// reference point. Every point must strictly dominate the reference;
/// otherwise throws std::invalid_argument.
double hypervolume(const std::vector<std::array<double, 3>>& canonical_points,
                   const std::array<double, 3>& reference);

double hypervolume(const std::vector<ObjectiveVector>& points,
                   const std::array<double, 3>& canonical_reference);

/// Hypervolume of the subset of points that strictly dominate the reference;
/// points outside the reference box contribute nothing. Used for archive
/// progress tracking where later points may fall outside a frozen box.
double hypervolume_clipped(const std::vector<ObjectiveVector>& points,
                           const std::array<double, 3>& canonical_reference);

/// Fraction of front B weakly dominated by at least one point of front A.
/// Throws std::invalid_argument when B is empty.
double coverage(const std::vector<ObjectiveVector>& a, const std::vector<ObjectiveVector>& b);

/// Where a front point came from: "ga" with the generation it was found, or
/// "wsum" with its weight vector.
struct Provenance {
  std::string method;
  std::array<double, 3> weights{0.0, 0.0, 0.0};
  bool has_weights = false;
  long generation = -1;
};

struct FrontPoint {
  ObjectiveVector objectives;
  Solution solution;
  std::vector<Provenance> provenance;
};

/// Mutually non-dominated set of solutions. Points with identical objective
/// vectors are collapsed and their provenance records merged.
class ParetoFront {
 public:
  /// Returns false when the candidate is dominated by (or duplicates) an
  /// existing point without contributing new provenance.
  bool add(FrontPoint point);

  const std::vector<FrontPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  std::vector<ObjectiveVector> objectives() const;

  /// Stable order for emission: ascending canonical objectives, lexicographic.
  void sort_canonical();

  static ParetoFront merged(const ParetoFront& a, const ParetoFront& b);

 private:
  std::vector<FrontPoint> points_;
};

}  // namespace clsc
