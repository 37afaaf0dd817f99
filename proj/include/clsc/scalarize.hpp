#pragma once

#include <array>
#include <optional>

#include "clsc/mincostflow.hpp"
#include "clsc/model.hpp"
#include "clsc/pareto.hpp"

namespace clsc {

/// Non-negative weights over (cost, co2, dispatch), summing to 1.
struct WeightVector {
  double cost = 0.0;
  double co2 = 0.0;
  double dispatch = 0.0;
};

/// Per-objective utopia/nadir pairs in canonical (minimization) space, used
/// to normalize incommensurate objectives before weighting.
struct NormalizationBounds {
  std::array<double, 3> utopia{0.0, 0.0, 0.0};
  std::array<double, 3> nadir{1.0, 1.0, 1.0};
};

class DegenerateBoundsError : public std::runtime_error {
 public:
  explicit DegenerateBoundsError(const std::string& what) : std::runtime_error(what) {}
};

class TractabilityError : public std::runtime_error {
 public:
  explicit TractabilityError(const std::string& what) : std::runtime_error(what) {}
};

class NoFeasibleConfigurationError : public std::runtime_error {
 public:
  explicit NoFeasibleConfigurationError(const std::string& what) : std::runtime_error(what) {}
};

std::vector<std::string> validate_weights(const WeightVector& w);

/// Weighted sum of utopia/nadir-normalized canonical objectives. Throws
/// DegenerateBoundsError when a weighted objective has utopia == nadir.
double scalarize(const WeightVector& w, const ObjectiveVector& v, const NormalizationBounds& b);

struct WeightedSolveResult {
  Solution solution;
  ObjectiveVector objectives;
  double scalarized = 0.0;
};

/// Exact single-objective solve for one weight vector: enumerate facility
/// configurations with adequate per-layer capacity, solve each scenario's
/// recourse flows by min-cost flow, and keep the configuration minimizing the
/// scalarized objective. Refuses instances above 2^20 configurations.
WeightedSolveResult solve_weighted_exact(const NetworkInstance& inst, const WeightVector& w,
                                         const NormalizationBounds& b);

/// Utopia from the three single-objective solves; nadir as the worst value of
/// each canonical objective over those three solutions.
NormalizationBounds compute_bounds(const NetworkInstance& inst);

/// Runs solve_weighted_exact over the simplex lattice {(i,j,k)/g} and returns
/// the non-dominated filter of the results, each tagged with its weights.
ParetoFront sweep_weights(const NetworkInstance& inst, std::size_t grid_resolution,
                          std::size_t threads = 1);

}  // namespace clsc
