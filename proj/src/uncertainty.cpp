#include "clsc/uncertainty.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace clsc {

ScenarioSet generate_scenarios(const std::vector<double>& base_demand, double spread,
                               int count, std::uint64_t /*seed*/) {
  if (spread < 0.0 || spread >= 1.0)
    throw std::invalid_argument("generate_scenarios: spread must lie in [0, 1)");
  if (count != 1 && count != 3)
    throw std::invalid_argument("generate_scenarios: count must be 1 or 3");

  ScenarioSet out;
  if (count == 1) {
    out.push_back({1.0, base_demand});
    return out;
  }
  auto scaled = [&](double factor) {
    std::vector<double> d(base_demand.size());
    for (std::size_t k = 0; k < base_demand.size(); ++k) d[k] = factor * base_demand[k];
    return d;
  };
  out.push_back({0.25, scaled(1.0 - spread)});
  out.push_back({0.50, base_demand});
  out.push_back({0.25, scaled(1.0 + spread)});
  return out;
}

std::vector<double> expected_demand(const ScenarioSet& scenarios) {
  if (scenarios.empty()) throw std::invalid_argument("expected_demand: empty scenario set");
  std::vector<double> out(scenarios.front().demand.size(), 0.0);
  for (const auto& s : scenarios)
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += s.probability * s.demand[k];
  return out;
}

std::vector<std::string> validate_scenarios(const ScenarioSet& scenarios,
                                            std::size_t num_customers) {
  std::vector<std::string> errors;
  if (scenarios.empty()) {
    errors.push_back("scenarios: set is empty");
    return errors;
  }
  double total_p = 0.0;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const auto& sc = scenarios[s];
    std::string where = "scenario " + std::to_string(s);
    if (sc.probability < 0.0 || sc.probability > 1.0)
      errors.push_back(where + ": probability " + std::to_string(sc.probability) +
                       " outside [0, 1]");
    if (sc.demand.size() != num_customers)
      errors.push_back(where + ": demand entries (" + std::to_string(sc.demand.size()) +
                       ") do not match customer count (" + std::to_string(num_customers) + ")");
    for (std::size_t k = 0; k < sc.demand.size(); ++k)
      if (!(sc.demand[k] >= 0.0))
        errors.push_back(where + ": negative demand for customer index " + std::to_string(k));
    total_p += sc.probability;
  }
  if (std::abs(total_p - 1.0) > kProbabilityTol)
    errors.push_back("scenarios: probabilities sum to " + std::to_string(total_p));
  return errors;
}

}  // namespace clsc
