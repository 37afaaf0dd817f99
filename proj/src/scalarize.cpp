#include "clsc/scalarize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace clsc {

namespace {

constexpr double kInfCapacity = 1e15;

struct Lambda {
  double cost = 0.0, co2 = 0.0, dispatch = 0.0;
};

Lambda lambda_of(const WeightVector& w, const NormalizationBounds& b) {
  auto term = [&](double weight, int o, const char* name) {
    if (weight == 0.0) return 0.0;
    double span = b.nadir[o] - b.utopia[o];
    if (!(span > 0.0))
      throw DegenerateBoundsError(std::string("scalarize: bounds are degenerate on weighted "
                                              "objective ") +
                                  name);
    return weight / span;
  };
  return {term(w.cost, 0, "cost"), term(w.co2, 1, "co2"), term(w.dispatch, 2, "dispatch")};
}

}  // namespace

std::vector<std::string> validate_weights(const WeightVector& w) {
  std::vector<std::string> errors;
  if (!(w.cost >= 0.0) || !(w.co2 >= 0.0) || !(w.dispatch >= 0.0))
    errors.push_back("weights must be non-negative");
  double sum = w.cost + w.co2 + w.dispatch;
  if (std::abs(sum - 1.0) > 1e-9)
    errors.push_back("weights sum to " + std::to_string(sum) + ", expected 1");
  return errors;
}

double scalarize(const WeightVector& w, const ObjectiveVector& v, const NormalizationBounds& b) {
  auto canon = canonicalize(v);
  double value = 0.0;
  auto term = [&](double weight, int o, const char* name) {
    if (weight == 0.0) return;
    double span = b.nadir[o] - b.utopia[o];
    if (!(span > 0.0))
      throw DegenerateBoundsError(std::string("scalarize: bounds are degenerate on weighted "
                                              "objective ") +
                                  name);
    value += weight * (canon[o] - b.utopia[o]) / span;
  };
  term(w.cost, 0, "cost");
  term(w.co2, 1, "co2");
  term(w.dispatch, 2, "dispatch");
  return value;
}

namespace {

// Scenario recourse solver for one facility configuration. All unit
// coefficients are lambda-weighted so a flow's cost equals its marginal
// contribution to the scalarized objective.
class ConfigurationSolver {
 public:
  ConfigurationSolver(const NetworkInstance& inst, const Lambda& lambda,
                      std::vector<std::uint8_t> open_plants,
                      std::vector<std::uint8_t> open_warehouses,
                      std::vector<std::uint8_t> open_collection)
      : inst_(inst),
        lam_(lambda),
        open_plants_(std::move(open_plants)),
        open_warehouses_(std::move(open_warehouses)),
        open_collection_(std::move(open_collection)) {}

  // Best flows for one scenario, or nullopt when the configuration cannot
  // carry it.
  std::optional<ScenarioFlows> solve_scenario(const DemandScenario& scenario) const;

 private:
  double prod_unit(std::size_t i) const {
    return lam_.cost * inst_.plants[i].production_cost +
           lam_.co2 * inst_.plants[i].production_emission;
  }
  double reman_unit(std::size_t i) const {
    return lam_.cost * inst_.plants[i].remanufacturing_cost +
           lam_.co2 * inst_.plants[i].remanufacturing_emission;
  }
  double handle_unit(std::size_t j) const {
    return lam_.cost * inst_.warehouses[j].handling_cost +
           lam_.co2 * inst_.warehouses[j].handling_emission;
  }
  double disassembly_unit(std::size_t l) const {
    return lam_.cost * inst_.collection_centers[l].disassembly_cost +
           lam_.co2 * inst_.collection_centers[l].disassembly_emission;
  }
  double disposal_unit(std::size_t m) const {
    return lam_.cost * inst_.disposal_sites[m].disposal_cost +
           lam_.co2 * inst_.disposal_sites[m].disposal_emission;
  }
  double arc_unit(const ArcTable& t, std::size_t r, std::size_t c) const {
    return lam_.cost * t.cost(r, c) + lam_.co2 * t.emission(r, c);
  }

  double scenario_value(const ScenarioFlows& f) const {
    return lam_.cost * scenario_variable_cost(inst_, f) +
           lam_.co2 * scenario_variable_emissions(inst_, f) -
           lam_.dispatch * scenario_dispatch(inst_, f);
  }

  std::optional<ScenarioFlows> solve_joint_no_disposal(const DemandScenario& scenario) const;

  struct ReversePlan {
    Mat yc, yd;
    std::vector<double> collected;  // per collection center
  };
  std::optional<ReversePlan> solve_reverse(const DemandScenario& scenario,
                                           const std::vector<double>& rho) const;

  struct ForwardPlan {
    Mat ya, yb;
    std::vector<double> outbound;  // per plant
  };
  std::optional<ForwardPlan> solve_forward(const DemandScenario& scenario,
                                           const std::vector<double>& reman_credit) const;

  Mat assign_remanufacturing(const std::vector<double>& amounts,
                             const std::vector<double>& outbound) const;

  const NetworkInstance& inst_;
  Lambda lam_;
  std::vector<std::uint8_t> open_plants_, open_warehouses_, open_collection_;
};

// With beta == 0 every collected unit is remanufactured, so the whole
// scenario collapses to a single min-cost flow in which returned product
// re-enters the plants' pools and displaces new production exactly.
std::optional<ScenarioFlows> ConfigurationSolver::solve_joint_no_disposal(
    const DemandScenario& scenario) const {
  const std::size_t P = inst_.num_plants(), W = inst_.num_warehouses(),
                    C = inst_.num_customers(), L = inst_.num_collection(),
                    M = inst_.num_disposal();
  double total_demand = 0.0;
  for (double d : scenario.demand) total_demand += d;

  // Node ids.
  std::size_t n = 0;
  std::size_t depot = n++;
  std::vector<std::size_t> pin(P), pout(P), win(W), wout(W), cust(C), ret(C), cin(L), cout_(L);
  for (auto& v : pin) v = n++;
  for (auto& v : pout) v = n++;
  for (auto& v : win) v = n++;
  for (auto& v : wout) v = n++;
  for (auto& v : cust) v = n++;
  for (auto& v : ret) v = n++;
  for (auto& v : cin) v = n++;
  for (auto& v : cout_) v = n++;

  MinCostFlow net(n);
  Mat ya_arcs(P, W), yb_arcs(W, C), yc_arcs(C, L), ye_arcs(L, P);
  constexpr double unset = -1.0;
  for (auto* m : {&ya_arcs, &yb_arcs, &yc_arcs, &ye_arcs})
    for (std::size_t r = 0; r < m->rows(); ++r)
      for (std::size_t c = 0; c < m->cols(); ++c) (*m)(r, c) = unset;

  for (std::size_t i = 0; i < P; ++i) {
    if (!open_plants_[i]) continue;
    net.add_arc(depot, pin[i], kInfCapacity, prod_unit(i));
    net.add_arc(pin[i], depot, kInfCapacity, 0.0);  // absorbs surplus returns
    net.add_arc(pin[i], pout[i], inst_.plants[i].capacity, 0.0);
  }
  for (std::size_t j = 0; j < W; ++j) {
    if (!open_warehouses_[j]) continue;
    net.add_arc(win[j], wout[j], inst_.warehouses[j].capacity, handle_unit(j));
    for (std::size_t i = 0; i < P; ++i)
      if (open_plants_[i])
        ya_arcs(i, j) = static_cast<double>(
            net.add_arc(pout[i], win[j], kInfCapacity, arc_unit(inst_.plant_warehouse, i, j)));
    for (std::size_t k = 0; k < C; ++k)
      yb_arcs(j, k) = static_cast<double>(net.add_arc(
          wout[j], cust[k], kInfCapacity,
          arc_unit(inst_.warehouse_customer, j, k) -
              lam_.dispatch * inst_.warehouses[j].reliability));
  }
  for (std::size_t l = 0; l < L; ++l) {
    if (!open_collection_[l]) continue;
    net.add_arc(cin[l], cout_[l], inst_.collection_centers[l].capacity, disassembly_unit(l));
    for (std::size_t k = 0; k < C; ++k)
      yc_arcs(k, l) = static_cast<double>(net.add_arc(
          ret[k], cin[l], kInfCapacity, arc_unit(inst_.customer_collection, k, l)));
    for (std::size_t i = 0; i < P; ++i)
      if (open_plants_[i])
        ye_arcs(l, i) = static_cast<double>(net.add_arc(
            cout_[l], pin[i], kInfCapacity,
            arc_unit(inst_.collection_plant, l, i) + reman_unit(i)));
  }

  net.set_supply(depot, (1.0 - inst_.alpha) * total_demand);
  for (std::size_t k = 0; k < C; ++k) {
    net.set_supply(cust[k], -scenario.demand[k]);
    net.set_supply(ret[k], inst_.alpha * scenario.demand[k]);
  }

  if (!net.solve()) return std::nullopt;

  ScenarioFlows f;
  f.ya = Mat(P, W);
  f.yb = Mat(W, C);
  f.yc = Mat(C, L);
  f.yd = Mat(L, M);
  f.ye = Mat(L, P);
  auto read = [&](const Mat& arcs, Mat& out) {
    for (std::size_t r = 0; r < arcs.rows(); ++r)
      for (std::size_t c = 0; c < arcs.cols(); ++c)
        if (arcs(r, c) != unset)
          out(r, c) = net.flow(static_cast<std::size_t>(arcs(r, c)));
  };
  read(ya_arcs, f.ya);
  read(yb_arcs, f.yb);
  read(yc_arcs, f.yc);
  read(ye_arcs, f.ye);
  return f;
}

std::optional<ConfigurationSolver::ReversePlan> ConfigurationSolver::solve_reverse(
    const DemandScenario& scenario, const std::vector<double>& rho) const {
  const std::size_t C = inst_.num_customers(), L = inst_.num_collection(),
                    M = inst_.num_disposal();
  const double beta = inst_.beta;
  double total_returns = 0.0;
  for (double d : scenario.demand) total_returns += inst_.alpha * d;

  ReversePlan plan;
  plan.yc = Mat(C, L);
  plan.yd = Mat(L, M);
  plan.collected.assign(L, 0.0);
  if (total_returns <= 0.0) return plan;

  std::size_t n = 0;
  std::vector<std::size_t> ret(C), cin(L), cout_(L), site(M);
  for (auto& v : ret) v = n++;
  for (auto& v : cin) v = n++;
  for (auto& v : cout_) v = n++;
  for (auto& v : site) v = n++;
  std::size_t sink = n++;

  MinCostFlow net(n);
  Mat yc_arcs(C, L), yd_arcs(L, M);
  constexpr double unset = -1.0;
  for (auto* m : {&yc_arcs, &yd_arcs})
    for (std::size_t r = 0; r < m->rows(); ++r)
      for (std::size_t c = 0; c < m->cols(); ++c) (*m)(r, c) = unset;

  for (std::size_t l = 0; l < L; ++l) {
    if (!open_collection_[l]) continue;
    net.add_arc(cin[l], cout_[l], inst_.collection_centers[l].capacity,
                disassembly_unit(l) + rho[l]);
    for (std::size_t k = 0; k < C; ++k)
      yc_arcs(k, l) = static_cast<double>(net.add_arc(
          ret[k], cin[l], kInfCapacity, arc_unit(inst_.customer_collection, k, l)));
    if (beta > 0.0)
      for (std::size_t m = 0; m < M; ++m)
        yd_arcs(l, m) = static_cast<double>(net.add_arc(
            cout_[l], site[m], kInfCapacity,
            beta * (arc_unit(inst_.collection_disposal, l, m) + disposal_unit(m))));
  }
  if (beta > 0.0) {
    for (std::size_t m = 0; m < M; ++m)
      net.add_arc(site[m], sink, inst_.disposal_sites[m].capacity / beta, 0.0);
  } else {
    for (std::size_t l = 0; l < L; ++l)
      if (open_collection_[l]) net.add_arc(cout_[l], sink, kInfCapacity, 0.0);
  }

  for (std::size_t k = 0; k < C; ++k) net.set_supply(ret[k], inst_.alpha * scenario.demand[k]);
  net.set_supply(sink, -total_returns);

  if (!net.solve()) return std::nullopt;

  for (std::size_t k = 0; k < C; ++k)
    for (std::size_t l = 0; l < L; ++l)
      if (yc_arcs(k, l) != unset)
        plan.yc(k, l) = net.flow(static_cast<std::size_t>(yc_arcs(k, l)));
  for (std::size_t l = 0; l < L; ++l) plan.collected[l] = plan.yc.col_sum(l);
  if (beta > 0.0)
    for (std::size_t l = 0; l < L; ++l)
      for (std::size_t m = 0; m < M; ++m)
        if (yd_arcs(l, m) != unset)
          plan.yd(l, m) = beta * net.flow(static_cast<std::size_t>(yd_arcs(l, m)));
  return plan;
}

std::optional<ConfigurationSolver::ForwardPlan> ConfigurationSolver::solve_forward(
    const DemandScenario& scenario, const std::vector<double>& reman_credit) const {
  const std::size_t P = inst_.num_plants(), W = inst_.num_warehouses(),
                    C = inst_.num_customers();
  double total_demand = 0.0;
  for (double d : scenario.demand) total_demand += d;

  ForwardPlan plan;
  plan.ya = Mat(P, W);
  plan.yb = Mat(W, C);
  plan.outbound.assign(P, 0.0);
  if (total_demand <= 0.0) return plan;

  std::size_t n = 0;
  std::size_t depot = n++;
  std::vector<std::size_t> pin(P), pout(P), win(W), wout(W), cust(C);
  for (auto& v : pin) v = n++;
  for (auto& v : pout) v = n++;
  for (auto& v : win) v = n++;
  for (auto& v : wout) v = n++;
  for (auto& v : cust) v = n++;

  MinCostFlow net(n);
  Mat ya_arcs(P, W), yb_arcs(W, C);
  constexpr double unset = -1.0;
  for (auto* m : {&ya_arcs, &yb_arcs})
    for (std::size_t r = 0; r < m->rows(); ++r)
      for (std::size_t c = 0; c < m->cols(); ++c) (*m)(r, c) = unset;

  for (std::size_t i = 0; i < P; ++i) {
    if (!open_plants_[i]) continue;
    if (reman_credit[i] > 0.0) net.add_arc(depot, pin[i], reman_credit[i], 0.0);
    net.add_arc(depot, pin[i], kInfCapacity, prod_unit(i));
    net.add_arc(pin[i], pout[i], inst_.plants[i].capacity, 0.0);
  }
  for (std::size_t j = 0; j < W; ++j) {
    if (!open_warehouses_[j]) continue;
    net.add_arc(win[j], wout[j], inst_.warehouses[j].capacity, handle_unit(j));
    for (std::size_t i = 0; i < P; ++i)
      if (open_plants_[i])
        ya_arcs(i, j) = static_cast<double>(
            net.add_arc(pout[i], win[j], kInfCapacity, arc_unit(inst_.plant_warehouse, i, j)));
    for (std::size_t k = 0; k < C; ++k)
      yb_arcs(j, k) = static_cast<double>(net.add_arc(
          wout[j], cust[k], kInfCapacity,
          arc_unit(inst_.warehouse_customer, j, k) -
              lam_.dispatch * inst_.warehouses[j].reliability));
  }

  net.set_supply(depot, total_demand);
  for (std::size_t k = 0; k < C; ++k) net.set_supply(cust[k], -scenario.demand[k]);

  if (!net.solve()) return std::nullopt;

  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t j = 0; j < W; ++j)
      if (ya_arcs(i, j) != unset)
        plan.ya(i, j) = net.flow(static_cast<std::size_t>(ya_arcs(i, j)));
  for (std::size_t j = 0; j < W; ++j)
    for (std::size_t k = 0; k < C; ++k)
      if (yb_arcs(j, k) != unset)
        plan.yb(j, k) = net.flow(static_cast<std::size_t>(yb_arcs(j, k)));
  for (std::size_t i = 0; i < P; ++i) plan.outbound[i] = plan.ya.row_sum(i);
  return plan;
}

// Routes per-center remanufacturing volumes to open plants. Units covered by
// a plant's outbound production earn the production offset; surplus units pay
// full remanufacturing cost without the credit.
Mat ConfigurationSolver::assign_remanufacturing(const std::vector<double>& amounts,
                                                const std::vector<double>& outbound) const {
  const std::size_t P = inst_.num_plants(), L = inst_.num_collection();
  Mat ye(L, P);
  double total = 0.0;
  for (double a : amounts) total += a;
  if (total <= 0.0) return ye;

  std::size_t n = 0;
  std::vector<std::size_t> center(L), credited(P), uncredited(P);
  for (auto& v : center) v = n++;
  for (auto& v : credited) v = n++;
  for (auto& v : uncredited) v = n++;
  std::size_t sink = n++;

  MinCostFlow net(n);
  Mat cred_arcs(L, P), unc_arcs(L, P);
  constexpr double unset = -1.0;
  for (auto* m : {&cred_arcs, &unc_arcs})
    for (std::size_t r = 0; r < m->rows(); ++r)
      for (std::size_t c = 0; c < m->cols(); ++c) (*m)(r, c) = unset;

  for (std::size_t i = 0; i < P; ++i) {
    if (!open_plants_[i]) continue;
    net.add_arc(credited[i], sink, outbound[i], 0.0);
    net.add_arc(uncredited[i], sink, kInfCapacity, 0.0);
    for (std::size_t l = 0; l < L; ++l) {
      if (!open_collection_[l]) continue;
      double base = arc_unit(inst_.collection_plant, l, i) + reman_unit(i);
      cred_arcs(l, i) =
          static_cast<double>(net.add_arc(center[l], credited[i], kInfCapacity,
                                          base - prod_unit(i)));
      unc_arcs(l, i) =
          static_cast<double>(net.add_arc(center[l], uncredited[i], kInfCapacity, base));
    }
  }
  for (std::size_t l = 0; l < L; ++l) net.set_supply(center[l], amounts[l]);
  net.set_supply(sink, -total);

  if (!net.solve())
    throw std::logic_error("assign_remanufacturing: routing unexpectedly infeasible");

  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t i = 0; i < P; ++i) {
      double f = 0.0;
      if (cred_arcs(l, i) != unset) f += net.flow(static_cast<std::size_t>(cred_arcs(l, i)));
      if (unc_arcs(l, i) != unset) f += net.flow(static_cast<std::size_t>(unc_arcs(l, i)));
      ye(l, i) = f;
    }
  return ye;
}

std::optional<ScenarioFlows> ConfigurationSolver::solve_scenario(
    const DemandScenario& scenario) const {
  const std::size_t P = inst_.num_plants(), L = inst_.num_collection(),
                    M = inst_.num_disposal();
  if (inst_.beta == 0.0) return solve_joint_no_disposal(scenario);

  // Two-pass scheme: the reverse side first (its volumes are fixed by alpha
  // and the demands), then forward flows with remanufacturing credits, then
  // an offset-aware reassignment of the remanufacturing legs. The per-center
  // remanufacturing marginal rho is bracketed by its no-offset and
  // full-offset variants; both pipelines run and the better scenario value
  // wins.
  const double one_minus_beta = 1.0 - inst_.beta;
  auto rho_variant = [&](bool with_offset) {
    std::vector<double> rho(L, 0.0);
    if (one_minus_beta <= 0.0) return rho;
    for (std::size_t l = 0; l < L; ++l) {
      if (!open_collection_[l]) continue;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < P; ++i) {
        if (!open_plants_[i]) continue;
        double leg = arc_unit(inst_.collection_plant, l, i) + reman_unit(i);
        if (with_offset) leg -= prod_unit(i);
        best = std::min(best, leg);
      }
      rho[l] = one_minus_beta * best;
    }
    return rho;
  };

  std::optional<ScenarioFlows> best;
  double best_value = std::numeric_limits<double>::infinity();
  for (bool with_offset : {false, true}) {
    auto reverse = solve_reverse(scenario, rho_variant(with_offset));
    if (!reverse) continue;

    std::vector<double> reman_amounts(L, 0.0);
    for (std::size_t l = 0; l < L; ++l)
      reman_amounts[l] = one_minus_beta * reverse->collected[l];

    std::vector<double> credit(P, 0.0);
    for (int round = 0; round < 4; ++round) {
      auto forward = solve_forward(scenario, credit);
      if (!forward) break;
      Mat ye = assign_remanufacturing(reman_amounts, forward->outbound);

      ScenarioFlows f;
      f.ya = forward->ya;
      f.yb = forward->yb;
      f.yc = reverse->yc;
      f.yd = reverse->yd;
      f.ye = ye;
      double value = scenario_value(f);
      if (value < best_value) {
        best_value = value;
        best = f;
      }

      std::vector<double> next_credit(P, 0.0);
      for (std::size_t i = 0; i < P; ++i) next_credit[i] = ye.col_sum(i);
      if (next_credit == credit) break;
      credit = std::move(next_credit);
    }
  }
  (void)M;
  return best;
}

struct LayerRequirements {
  double plants = 0.0, warehouses = 0.0, collection = 0.0, disposal = 0.0;
};

LayerRequirements requirements_of(const NetworkInstance& inst) {
  double max_demand = inst.max_scenario_demand();
  return {max_demand, max_demand, inst.alpha * max_demand, inst.beta * inst.alpha * max_demand};
}

}  // namespace

WeightedSolveResult solve_weighted_exact(const NetworkInstance& inst, const WeightVector& w,
                                         const NormalizationBounds& b) {
  auto weight_errors = validate_weights(w);
  if (!weight_errors.empty())
    throw std::invalid_argument("solve_weighted_exact: " + weight_errors.front());

  const std::size_t P = inst.num_plants(), W = inst.num_warehouses(), L = inst.num_collection();
  const std::size_t facilities = P + W + L;
  if (facilities > 20)
    throw TractabilityError("solve_weighted_exact: " + std::to_string(facilities) +
                            " facilities exceed the 2^20 configuration guard");

  const Lambda lam = lambda_of(w, b);
  const LayerRequirements req = requirements_of(inst);

  double disposal_total = 0.0;
  for (const auto& d : inst.disposal_sites) disposal_total += d.capacity;
  if (disposal_total + kFeasibilityTol < req.disposal)
    throw NoFeasibleConfigurationError(
        "solve_weighted_exact: disposal capacity cannot absorb the worst scenario");

  std::optional<WeightedSolveResult> best;
  const std::uint64_t config_count = std::uint64_t{1} << facilities;
  for (std::uint64_t mask = 0; mask < config_count; ++mask) {
    std::vector<std::uint8_t> open_p(P, 0), open_w(W, 0), open_l(L, 0);
    double cap_p = 0.0, cap_w = 0.0, cap_l = 0.0;
    for (std::size_t i = 0; i < P; ++i)
      if (mask & (std::uint64_t{1} << i)) {
        open_p[i] = 1;
        cap_p += inst.plants[i].capacity;
      }
    for (std::size_t j = 0; j < W; ++j)
      if (mask & (std::uint64_t{1} << (P + j))) {
        open_w[j] = 1;
        cap_w += inst.warehouses[j].capacity;
      }
    for (std::size_t l = 0; l < L; ++l)
      if (mask & (std::uint64_t{1} << (P + W + l))) {
        open_l[l] = 1;
        cap_l += inst.collection_centers[l].capacity;
      }
    if (cap_p + kFeasibilityTol < req.plants || cap_w + kFeasibilityTol < req.warehouses ||
        cap_l + kFeasibilityTol < req.collection)
      continue;

    ConfigurationSolver solver(inst, lam, open_p, open_w, open_l);
    Solution candidate;
    candidate.open_plants = open_p;
    candidate.open_warehouses = open_w;
    candidate.open_collection = open_l;
    bool feasible = true;
    for (const auto& scenario : inst.scenarios) {
      auto flows = solver.solve_scenario(scenario);
      if (!flows) {
        feasible = false;
        break;
      }
      candidate.flows.push_back(std::move(*flows));
    }
    if (!feasible) continue;

    ObjectiveVector objectives = evaluate(inst, candidate);
    double value = scalarize(w, objectives, b);
    if (!best || value < best->scalarized)
      best = WeightedSolveResult{std::move(candidate), objectives, value};
  }

  if (!best)
    throw NoFeasibleConfigurationError(
        "solve_weighted_exact: no facility configuration can serve every scenario");
  return *best;
}

NormalizationBounds compute_bounds(const NetworkInstance& inst) {
  const NormalizationBounds unit_bounds;  // (0,1) spans: corner argmins unaffected
  const std::array<WeightVector, 3> corners{WeightVector{1.0, 0.0, 0.0},
                                            WeightVector{0.0, 1.0, 0.0},
                                            WeightVector{0.0, 0.0, 1.0}};
  std::array<std::array<double, 3>, 3> canon{};
  for (int o = 0; o < 3; ++o)
    canon[o] = canonicalize(solve_weighted_exact(inst, corners[o], unit_bounds).objectives);

  NormalizationBounds b;
  for (int o = 0; o < 3; ++o) {
    b.utopia[o] = canon[o][o];
    b.nadir[o] = std::max({canon[0][o], canon[1][o], canon[2][o]});
  }
  return b;
}

ParetoFront sweep_weights(const NetworkInstance& inst, std::size_t grid_resolution,
                          std::size_t threads) {
  if (grid_resolution < 1)
    throw std::invalid_argument("sweep_weights: grid_resolution must be >= 1");
  const NormalizationBounds bounds = compute_bounds(inst);

  std::vector<WeightVector> lattice;
  const double g = static_cast<double>(grid_resolution);
  for (std::size_t i = 0; i <= grid_resolution; ++i)
    for (std::size_t j = 0; i + j <= grid_resolution; ++j) {
      std::size_t k = grid_resolution - i - j;
      lattice.push_back({static_cast<double>(i) / g, static_cast<double>(j) / g,
                         static_cast<double>(k) / g});
    }

  std::vector<std::optional<WeightedSolveResult>> results(lattice.size());
  std::exception_ptr error;
  std::mutex error_mutex;
  parallel_for(lattice.size(), threads, [&](std::size_t idx) {
    try {
      results[idx] = solve_weighted_exact(inst, lattice[idx], bounds);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  });
  if (error) std::rethrow_exception(error);

  ParetoFront front;
  for (std::size_t idx = 0; idx < lattice.size(); ++idx) {
    Provenance prov;
    prov.method = "wsum";
    prov.weights = {lattice[idx].cost, lattice[idx].co2, lattice[idx].dispatch};
    prov.has_weights = true;
    front.add({results[idx]->objectives, std::move(results[idx]->solution), {prov}});
  }
  front.sort_canonical();
  return front;
}

}  // namespace clsc
