#include "clsc/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace clsc {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void check_nonneg(std::vector<std::string>& errors, double v, const std::string& where) {
  if (!(v >= 0.0)) errors.push_back(where + " is negative (" + fmt(v) + ")");
}

void check_arc_table(std::vector<std::string>& errors, const ArcTable& t,
                     const std::string& name, std::size_t rows, std::size_t cols) {
  if (t.cost.rows() != rows || t.cost.cols() != cols)
    errors.push_back("arcs." + name + ": cost matrix is " + std::to_string(t.cost.rows()) +
                     "x" + std::to_string(t.cost.cols()) + ", expected " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  if (t.emission.rows() != rows || t.emission.cols() != cols)
    errors.push_back("arcs." + name + ": emission matrix is " +
                     std::to_string(t.emission.rows()) + "x" +
                     std::to_string(t.emission.cols()) + ", expected " + std::to_string(rows) +
                     "x" + std::to_string(cols));
  if (t.cost.rows() == rows && t.cost.cols() == cols)
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (!(t.cost(r, c) >= 0.0) || !(t.emission(r, c) >= 0.0))
          errors.push_back("arcs." + name + "[" + std::to_string(r) + "][" +
                           std::to_string(c) + "]: negative cost or emission");
}

void check_unique_ids(std::vector<std::string>& errors, std::vector<std::string> ids,
                      const std::string& layer) {
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 1; i < ids.size(); ++i)
    if (ids[i] == ids[i - 1])
      errors.push_back(layer + ": duplicate id \"" + ids[i] + "\"");
}

}  // namespace

double NetworkInstance::max_scenario_demand() const {
  double worst = 0.0;
  for (const auto& s : scenarios) {
    double total = 0.0;
    for (double d : s.demand) total += d;
    worst = std::max(worst, total);
  }
  return worst;
}

InfeasibleSolutionError::InfeasibleSolutionError(FeasibilityReport report)
    : std::runtime_error("solution is infeasible: " +
                         (report.violations.empty()
                              ? std::string("(no detail)")
                              : report.violations.front().kind + " at " +
                                    report.violations.front().location) +
                         " (" + std::to_string(report.violations.size()) + " violation(s))"),
      report_(std::move(report)) {}

std::vector<std::string> validate_instance(const NetworkInstance& inst) {
  std::vector<std::string> errors;

  if (inst.plants.empty()) errors.push_back("plants: layer is empty");
  if (inst.warehouses.empty()) errors.push_back("warehouses: layer is empty");
  if (inst.collection_centers.empty()) errors.push_back("collection_centers: layer is empty");
  if (inst.disposal_sites.empty()) errors.push_back("disposal_sites: layer is empty");
  if (inst.customers.empty()) errors.push_back("customers: list is empty");

  for (const auto& p : inst.plants) {
    check_nonneg(errors, p.fixed_cost, "plant " + p.id + ": fixed_cost");
    check_nonneg(errors, p.capacity, "plant " + p.id + ": capacity");
    check_nonneg(errors, p.production_cost, "plant " + p.id + ": production_cost");
    check_nonneg(errors, p.production_emission, "plant " + p.id + ": production_emission");
    check_nonneg(errors, p.remanufacturing_cost, "plant " + p.id + ": remanufacturing_cost");
    check_nonneg(errors, p.remanufacturing_emission,
                 "plant " + p.id + ": remanufacturing_emission");
  }
  for (const auto& w : inst.warehouses) {
    check_nonneg(errors, w.fixed_cost, "warehouse " + w.id + ": fixed_cost");
    check_nonneg(errors, w.capacity, "warehouse " + w.id + ": capacity");
    check_nonneg(errors, w.handling_cost, "warehouse " + w.id + ": handling_cost");
    check_nonneg(errors, w.handling_emission, "warehouse " + w.id + ": handling_emission");
    if (!(w.reliability > 0.0 && w.reliability <= 1.0))
      errors.push_back("warehouse " + w.id + ": reliability out of range (0, 1], got " +
                       fmt(w.reliability));
  }
  for (const auto& c : inst.collection_centers) {
    check_nonneg(errors, c.fixed_cost, "collection center " + c.id + ": fixed_cost");
    check_nonneg(errors, c.capacity, "collection center " + c.id + ": capacity");
    check_nonneg(errors, c.disassembly_cost, "collection center " + c.id + ": disassembly_cost");
    check_nonneg(errors, c.disassembly_emission,
                 "collection center " + c.id + ": disassembly_emission");
  }
  for (const auto& d : inst.disposal_sites) {
    check_nonneg(errors, d.capacity, "disposal site " + d.id + ": capacity");
    check_nonneg(errors, d.disposal_cost, "disposal site " + d.id + ": disposal_cost");
    check_nonneg(errors, d.disposal_emission, "disposal site " + d.id + ": disposal_emission");
  }

  if (!(inst.alpha >= 0.0 && inst.alpha <= 1.0))
    errors.push_back("alpha out of range [0, 1], got " + fmt(inst.alpha));
  if (!(inst.beta >= 0.0 && inst.beta <= 1.0))
    errors.push_back("beta out of range [0, 1], got " + fmt(inst.beta));

  const std::size_t P = inst.num_plants(), W = inst.num_warehouses(), C = inst.num_customers(),
                    L = inst.num_collection(), M = inst.num_disposal();
  check_arc_table(errors, inst.plant_warehouse, "plant_warehouse", P, W);
  check_arc_table(errors, inst.warehouse_customer, "warehouse_customer", W, C);
  check_arc_table(errors, inst.customer_collection, "customer_collection", C, L);
  check_arc_table(errors, inst.collection_plant, "collection_plant", L, P);
  check_arc_table(errors, inst.collection_disposal, "collection_disposal", L, M);

  {
    std::vector<std::string> ids;
    for (const auto& p : inst.plants) ids.push_back(p.id);
    check_unique_ids(errors, ids, "plants");
    ids.clear();
    for (const auto& w : inst.warehouses) ids.push_back(w.id);
    check_unique_ids(errors, ids, "warehouses");
    ids.clear();
    for (const auto& c : inst.collection_centers) ids.push_back(c.id);
    check_unique_ids(errors, ids, "collection_centers");
    ids.clear();
    for (const auto& d : inst.disposal_sites) ids.push_back(d.id);
    check_unique_ids(errors, ids, "disposal_sites");
    check_unique_ids(errors, inst.customers, "customers");
  }

  auto scenario_errors = validate_scenarios(inst.scenarios, C);
  errors.insert(errors.end(), scenario_errors.begin(), scenario_errors.end());
  return errors;
}

namespace {

struct FlowShape {
  std::size_t P, W, C, L, M;
  bool ok(const ScenarioFlows& f) const {
    return f.ya.rows() == P && f.ya.cols() == W && f.yb.rows() == W && f.yb.cols() == C &&
           f.yc.rows() == C && f.yc.cols() == L && f.yd.rows() == L && f.yd.cols() == M &&
           f.ye.rows() == L && f.ye.cols() == P;
  }
};

void check_negativity(FeasibilityReport& rep, const Mat& m, const std::string& name,
                      std::size_t scenario) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (m(r, c) < -kFeasibilityTol)
        rep.violations.push_back({"negativity",
                                  name + "[" + std::to_string(r) + "][" + std::to_string(c) +
                                      "] scenario " + std::to_string(scenario),
                                  -m(r, c)});
}

}  // namespace

FeasibilityReport check_feasibility(const NetworkInstance& inst, const Solution& sol) {
  FeasibilityReport rep;
  const std::size_t P = inst.num_plants(), W = inst.num_warehouses(), C = inst.num_customers(),
                    L = inst.num_collection(), M = inst.num_disposal(),
                    S = inst.scenarios.size();
  const FlowShape shape{P, W, C, L, M};

  if (sol.open_plants.size() != P || sol.open_warehouses.size() != W ||
      sol.open_collection.size() != L || sol.flows.size() != S) {
    rep.violations.push_back({"conservation", "solution shape does not match instance", 0.0});
    return rep;
  }
  for (std::size_t s = 0; s < S; ++s)
    if (!shape.ok(sol.flows[s])) {
      rep.violations.push_back(
          {"conservation", "flow matrices of scenario " + std::to_string(s) + " misshaped", 0.0});
      return rep;
    }

  for (std::size_t s = 0; s < S; ++s) {
    const ScenarioFlows& f = sol.flows[s];
    const std::string sc = "scenario " + std::to_string(s);

    check_negativity(rep, f.ya, "Ya", s);
    check_negativity(rep, f.yb, "Yb", s);
    check_negativity(rep, f.yc, "Yc", s);
    check_negativity(rep, f.yd, "Yd", s);
    check_negativity(rep, f.ye, "Ye", s);

    // Flows require both endpoints open (customers and disposal sites are
    // always open).
    for (std::size_t i = 0; i < P; ++i)
      if (!sol.open_plants[i]) {
        double out = f.ya.row_sum(i), in = f.ye.col_sum(i);
        if (out > kFeasibilityTol || in > kFeasibilityTol)
          rep.violations.push_back(
              {"closed-facility", "plant " + inst.plants[i].id + " " + sc, out + in});
      }
    for (std::size_t j = 0; j < W; ++j)
      if (!sol.open_warehouses[j]) {
        double through = f.ya.col_sum(j) + f.yb.row_sum(j);
        if (through > kFeasibilityTol)
          rep.violations.push_back(
              {"closed-facility", "warehouse " + inst.warehouses[j].id + " " + sc, through});
      }
    for (std::size_t l = 0; l < L; ++l)
      if (!sol.open_collection[l]) {
        double through = f.yc.col_sum(l) + f.yd.row_sum(l) + f.ye.row_sum(l);
        if (through > kFeasibilityTol)
          rep.violations.push_back({"closed-facility",
                                    "collection center " + inst.collection_centers[l].id + " " + sc,
                                    through});
      }

    // Demand met exactly.
    for (std::size_t k = 0; k < C; ++k) {
      double delivered = f.yb.col_sum(k);
      double gap = std::abs(delivered - inst.scenarios[s].demand[k]);
      if (gap > kFeasibilityTol)
        rep.violations.push_back({"demand", "customer " + inst.customers[k] + " " + sc, gap});
    }

    // Warehouse conservation.
    for (std::size_t j = 0; j < W; ++j) {
      double gap = std::abs(f.ya.col_sum(j) - f.yb.row_sum(j));
      if (gap > kFeasibilityTol)
        rep.violations.push_back(
            {"conservation", "warehouse " + inst.warehouses[j].id + " " + sc, gap});
    }

    // Collection conservation.
    for (std::size_t l = 0; l < L; ++l) {
      double gap = std::abs(f.yc.col_sum(l) - (f.yd.row_sum(l) + f.ye.row_sum(l)));
      if (gap > kFeasibilityTol)
        rep.violations.push_back(
            {"conservation", "collection center " + inst.collection_centers[l].id + " " + sc, gap});
    }

    // Return ratio per customer.
    for (std::size_t k = 0; k < C; ++k) {
      double gap = std::abs(f.yc.row_sum(k) - inst.alpha * f.yb.col_sum(k));
      if (gap > kFeasibilityTol)
        rep.violations.push_back({"return-ratio", "customer " + inst.customers[k] + " " + sc, gap});
    }

    // Disposal ratio per collection center.
    for (std::size_t l = 0; l < L; ++l) {
      double gap = std::abs(f.yd.row_sum(l) - inst.beta * f.yc.col_sum(l));
      if (gap > kFeasibilityTol)
        rep.violations.push_back(
            {"disposal-ratio", "collection center " + inst.collection_centers[l].id + " " + sc, gap});
    }

    // Capacities at open facilities.
    for (std::size_t i = 0; i < P; ++i) {
      double over = f.ya.row_sum(i) - inst.plants[i].capacity;
      if (over > kFeasibilityTol)
        rep.violations.push_back({"capacity", "plant " + inst.plants[i].id + " " + sc, over});
    }
    for (std::size_t j = 0; j < W; ++j) {
      double over = f.yb.row_sum(j) - inst.warehouses[j].capacity;
      if (over > kFeasibilityTol)
        rep.violations.push_back({"capacity", "warehouse " + inst.warehouses[j].id + " " + sc, over});
    }
    for (std::size_t l = 0; l < L; ++l) {
      double over = f.yc.col_sum(l) - inst.collection_centers[l].capacity;
      if (over > kFeasibilityTol)
        rep.violations.push_back(
            {"capacity", "collection center " + inst.collection_centers[l].id + " " + sc, over});
    }
    for (std::size_t m = 0; m < M; ++m) {
      double over = f.yd.col_sum(m) - inst.disposal_sites[m].capacity;
      if (over > kFeasibilityTol)
        rep.violations.push_back(
            {"capacity", "disposal site " + inst.disposal_sites[m].id + " " + sc, over});
    }
  }
  return rep;
}

namespace {

// Shared aggregation for cost and emissions; selects the coefficient family.
double scenario_variable(const NetworkInstance& inst, const ScenarioFlows& f, bool emissions) {
  const std::size_t P = inst.num_plants(), W = inst.num_warehouses(),
                    L = inst.num_collection(), M = inst.num_disposal();
  double v = 0.0;

  for (std::size_t i = 0; i < P; ++i) {
    const auto& p = inst.plants[i];
    double outbound = f.ya.row_sum(i);
    double reman_in = f.ye.col_sum(i);
    double new_production = std::max(0.0, outbound - reman_in);
    v += new_production * (emissions ? p.production_emission : p.production_cost);
    v += reman_in * (emissions ? p.remanufacturing_emission : p.remanufacturing_cost);
  }
  for (std::size_t j = 0; j < W; ++j)
    v += f.yb.row_sum(j) *
         (emissions ? inst.warehouses[j].handling_emission : inst.warehouses[j].handling_cost);
  for (std::size_t l = 0; l < L; ++l)
    v += f.yc.col_sum(l) * (emissions ? inst.collection_centers[l].disassembly_emission
                                      : inst.collection_centers[l].disassembly_cost);
  for (std::size_t m = 0; m < M; ++m)
    v += f.yd.col_sum(m) * (emissions ? inst.disposal_sites[m].disposal_emission
                                      : inst.disposal_sites[m].disposal_cost);

  auto arc_total = [&](const Mat& flow, const ArcTable& table) {
    const Mat& coef = emissions ? table.emission : table.cost;
    double t = 0.0;
    for (std::size_t r = 0; r < flow.rows(); ++r)
      for (std::size_t c = 0; c < flow.cols(); ++c) t += flow(r, c) * coef(r, c);
    return t;
  };
  v += arc_total(f.ya, inst.plant_warehouse);
  v += arc_total(f.yb, inst.warehouse_customer);
  v += arc_total(f.yc, inst.customer_collection);
  v += arc_total(f.yd, inst.collection_disposal);
  v += arc_total(f.ye, inst.collection_plant);
  return v;
}

double variable_total(const NetworkInstance& inst, const Solution& sol, bool emissions) {
  double expected = 0.0;
  for (std::size_t s = 0; s < inst.scenarios.size(); ++s)
    expected += inst.scenarios[s].probability * scenario_variable(inst, sol.flows[s], emissions);
  return expected;
}

double cost_of(const NetworkInstance& inst, const Solution& sol) {
  double fixed = 0.0;
  for (std::size_t i = 0; i < inst.num_plants(); ++i)
    if (sol.open_plants[i]) fixed += inst.plants[i].fixed_cost;
  for (std::size_t j = 0; j < inst.num_warehouses(); ++j)
    if (sol.open_warehouses[j]) fixed += inst.warehouses[j].fixed_cost;
  for (std::size_t l = 0; l < inst.num_collection(); ++l)
    if (sol.open_collection[l]) fixed += inst.collection_centers[l].fixed_cost;
  return fixed + variable_total(inst, sol, /*emissions=*/false);
}

double emissions_of(const NetworkInstance& inst, const Solution& sol) {
  return variable_total(inst, sol, /*emissions=*/true);
}

double reliability_of(const NetworkInstance& inst, const Solution& sol) {
  double expected = 0.0;
  for (std::size_t s = 0; s < inst.scenarios.size(); ++s) {
    const Mat& yb = sol.flows[s].yb;
    double v = 0.0;
    for (std::size_t j = 0; j < inst.num_warehouses(); ++j)
      v += inst.warehouses[j].reliability * yb.row_sum(j);
    expected += inst.scenarios[s].probability * v;
  }
  return expected;
}

void require_feasible(const NetworkInstance& inst, const Solution& sol) {
  FeasibilityReport rep = check_feasibility(inst, sol);
  if (!rep.feasible()) throw InfeasibleSolutionError(std::move(rep));
}

}  // namespace

double eval_cost(const NetworkInstance& inst, const Solution& sol) {
  require_feasible(inst, sol);
  return cost_of(inst, sol);
}

double eval_emissions(const NetworkInstance& inst, const Solution& sol) {
  require_feasible(inst, sol);
  return emissions_of(inst, sol);
}

double eval_reliability(const NetworkInstance& inst, const Solution& sol) {
  require_feasible(inst, sol);
  return reliability_of(inst, sol);
}

ObjectiveVector evaluate(const NetworkInstance& inst, const Solution& sol) {
  require_feasible(inst, sol);
  return {cost_of(inst, sol), emissions_of(inst, sol), reliability_of(inst, sol)};
}

double scenario_variable_cost(const NetworkInstance& inst, const ScenarioFlows& flows) {
  return scenario_variable(inst, flows, /*emissions=*/false);
}

double scenario_variable_emissions(const NetworkInstance& inst, const ScenarioFlows& flows) {
  return scenario_variable(inst, flows, /*emissions=*/true);
}

double scenario_dispatch(const NetworkInstance& inst, const ScenarioFlows& flows) {
  double v = 0.0;
  for (std::size_t j = 0; j < inst.num_warehouses(); ++j)
    v += inst.warehouses[j].reliability * flows.yb.row_sum(j);
  return v;
}

}  // namespace clsc
