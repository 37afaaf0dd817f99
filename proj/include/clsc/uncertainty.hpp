#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace clsc {

/// One demand realization: a probability and a per-customer demand vector
/// (indexed in instance customer order).
struct DemandScenario {
  double probability = 0.0;
  std::vector<double> demand;
};

using ScenarioSet = std::vector<DemandScenario>;

inline constexpr double kProbabilityTol = 1e-9;

/// Builds a one- or three-point scenario set around a base demand vector.
/// count=1: the base demand with probability 1. count=3: low/base/high at
/// (1-spread), 1, (1+spread) times base with probabilities 0.25/0.5/0.25.
/// Deterministic in (base, spread, count); seed is reserved for future
/// sampling modes.
ScenarioSet generate_scenarios(const std::vector<double>& base_demand, double spread,
                               int count, std::uint64_t seed);

/// Probability-weighted per-customer demand.
std::vector<double> expected_demand(const ScenarioSet& scenarios);

/// Structural checks on a scenario set; returns one message per violation.
std::vector<std::string> validate_scenarios(const ScenarioSet& scenarios,
                                            std::size_t num_customers);

}  // namespace clsc
