#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "clsc/core.hpp"
#include "clsc/uncertainty.hpp"

namespace clsc {

// Unit transport cost/emission used to forbid an arc while keeping the arc
// tables dense.
inline constexpr double kForbiddenArc = 1e12;

// Absolute tolerance on flow equality constraints. Flows are continuous, so
// exact equality is not meaningful after arithmetic.
inline constexpr double kFeasibilityTol = 1e-6;

struct Plant {
  std::string id;
  double fixed_cost = 0.0;
  double capacity = 0.0;  // limit on outbound shipments per scenario
  double production_cost = 0.0;
  double production_emission = 0.0;
  double remanufacturing_cost = 0.0;
  double remanufacturing_emission = 0.0;
};

struct Warehouse {
  std::string id;
  double fixed_cost = 0.0;
  double capacity = 0.0;  // throughput limit per scenario
  double handling_cost = 0.0;
  double handling_emission = 0.0;
  double reliability = 1.0;  // in (0, 1]
};

struct CollectionCenter {
  std::string id;
  double fixed_cost = 0.0;
  double capacity = 0.0;  // inbound return limit per scenario
  double disassembly_cost = 0.0;
  double disassembly_emission = 0.0;
};

struct DisposalSite {
  std::string id;
  double capacity = 0.0;  // inbound limit per scenario
  double disposal_cost = 0.0;
  double disposal_emission = 0.0;
};

/// Unit transport cost and emission for every ordered pair of one arc family.
struct ArcTable {
  Mat cost;
  Mat emission;
};

/// Full problem data for one closed-loop network design instance.
///
/// Layers: plants -> warehouses -> customers (forward), customers ->
/// collection centers -> {disposal sites, plants} (reverse). Facility opening
/// decisions exist for plants, warehouses, and collection centers; customers
/// and disposal sites are always active.
struct NetworkInstance {
  std::vector<Plant> plants;
  std::vector<Warehouse> warehouses;
  std::vector<CollectionCenter> collection_centers;
  std::vector<DisposalSite> disposal_sites;
  std::vector<std::string> customers;

  ArcTable plant_warehouse;      // plants x warehouses
  ArcTable warehouse_customer;   // warehouses x customers
  ArcTable customer_collection;  // customers x collection centers
  ArcTable collection_plant;     // collection centers x plants
  ArcTable collection_disposal;  // collection centers x disposal sites

  ScenarioSet scenarios;
  double alpha = 0.0;  // fraction of delivered units returned by customers
  double beta = 0.0;   // fraction of collected units sent to disposal

  std::size_t num_plants() const { return plants.size(); }
  std::size_t num_warehouses() const { return warehouses.size(); }
  std::size_t num_customers() const { return customers.size(); }
  std::size_t num_collection() const { return collection_centers.size(); }
  std::size_t num_disposal() const { return disposal_sites.size(); }

  /// Largest total demand over scenarios; drives per-layer capacity needs.
  double max_scenario_demand() const;
};

/// Per-scenario recourse flows on the five arc families.
struct ScenarioFlows {
  Mat ya;  // plant -> warehouse
  Mat yb;  // warehouse -> customer
  Mat yc;  // customer -> collection center
  Mat yd;  // collection center -> disposal site
  Mat ye;  // collection center -> plant (remanufacturing)

  friend bool operator==(const ScenarioFlows& a, const ScenarioFlows& b) {
    return a.ya == b.ya && a.yb == b.yb && a.yc == b.yc && a.yd == b.yd && a.ye == b.ye;
  }
};

/// First-stage facility plan plus one flow plan per scenario.
struct Solution {
  std::vector<std::uint8_t> open_plants;
  std::vector<std::uint8_t> open_warehouses;
  std::vector<std::uint8_t> open_collection;
  std::vector<ScenarioFlows> flows;

  friend bool operator==(const Solution& a, const Solution& b) {
    return a.open_plants == b.open_plants && a.open_warehouses == b.open_warehouses &&
           a.open_collection == b.open_collection && a.flows == b.flows;
  }
};

/// (total cost, total CO2, expected reliable dispatch); the first two are
/// minimized, the third maximized.
struct ObjectiveVector {
  double total_cost = 0.0;
  double total_co2 = 0.0;
  double expected_dispatch = 0.0;

  friend bool operator==(const ObjectiveVector& a, const ObjectiveVector& b) {
    return a.total_cost == b.total_cost && a.total_co2 == b.total_co2 &&
           a.expected_dispatch == b.expected_dispatch;
  }
};

struct Violation {
  std::string kind;  // demand | conservation | capacity | closed-facility |
                     // return-ratio | disposal-ratio | negativity
  std::string location;
  double magnitude = 0.0;
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  bool feasible() const { return violations.empty(); }
};

class InfeasibleSolutionError : public std::runtime_error {
 public:
  explicit InfeasibleSolutionError(FeasibilityReport report);
  const FeasibilityReport& report() const { return report_; }

 private:
  FeasibilityReport report_;
};

/// Checks all NetworkInstance invariants; returns one message per violation
/// (empty means valid).
std::vector<std::string> validate_instance(const NetworkInstance& inst);

/// Checks every Solution invariant against the instance, with tolerance
/// kFeasibilityTol on equality constraints.
FeasibilityReport check_feasibility(const NetworkInstance& inst, const Solution& sol);

/// Expected total cost: opening costs plus probability-weighted variable,
/// activity, and transport costs. Remanufactured inflow offsets new
/// production at the receiving plant one-for-one.
double eval_cost(const NetworkInstance& inst, const Solution& sol);

/// Expected total CO2 over the same activity terms; no opening emissions.
double eval_emissions(const NetworkInstance& inst, const Solution& sol);

/// Expected units successfully dispatched: sum of r_j-weighted
/// warehouse->customer flows, probability-weighted over scenarios.
double eval_reliability(const NetworkInstance& inst, const Solution& sol);

/// All three objectives with a single feasibility check.
ObjectiveVector evaluate(const NetworkInstance& inst, const Solution& sol);

/// Variable (non-fixed) cost of one scenario's flows, before probability
/// weighting. No feasibility check.
double scenario_variable_cost(const NetworkInstance& inst, const ScenarioFlows& flows);

/// Same aggregation over emission coefficients.
double scenario_variable_emissions(const NetworkInstance& inst, const ScenarioFlows& flows);

/// Reliability-weighted units dispatched in one scenario.
double scenario_dispatch(const NetworkInstance& inst, const ScenarioFlows& flows);

}  // namespace clsc
