#include <cmath>

#include "clsc/model.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace clsc;
using namespace clsc::testing;

TEST_CASE("validate_instance accepts the tiny chain") {
  CHECK(validate_instance(tiny_chain_instance()).empty());
}

TEST_CASE("validate_instance rejects out-of-range reliability") {
  auto inst = tiny_chain_instance();
  inst.warehouses[0].reliability = 0.0;
  auto errors = validate_instance(inst);
  REQUIRE(!errors.empty());
  CHECK(errors[0].find("reliability out of range") != std::string::npos);
}

TEST_CASE("validate_instance rejects bad probability sum") {
  auto inst = tiny_chain_instance();
  inst.scenarios = {{0.5, {10.0}}, {0.4, {10.0}}};
  auto errors = validate_instance(inst);
  REQUIRE(!errors.empty());
  CHECK(errors.back().find("0.9") != std::string::npos);
}

TEST_CASE("validate_instance rejects negative coefficients and misshaped arcs") {
  auto inst = tiny_chain_instance();
  inst.plants[0].production_cost = -1.0;
  CHECK(!validate_instance(inst).empty());

  inst = tiny_chain_instance();
  inst.plant_warehouse.cost = Mat(2, 1, 1.0);  // wrong shape = missing entries
  CHECK(!validate_instance(inst).empty());

  inst = tiny_chain_instance();
  inst.alpha = 1.5;
  CHECK(!validate_instance(inst).empty());
}

TEST_CASE("eval_cost on zero demand is the fixed cost of the open set") {
  auto inst = tiny_chain_instance(0.0);
  auto sol = tiny_chain_solution(inst);
  CHECK(eval_cost(inst, sol) == doctest::Approx(150.0));
  CHECK(eval_emissions(inst, sol) == doctest::Approx(0.0));
  CHECK(eval_reliability(inst, sol) == doctest::Approx(0.0));
}

TEST_CASE("worked 1-1-1 arithmetic example") {
  auto inst = tiny_chain_instance(10.0);
  auto sol = tiny_chain_solution(inst);
  // 150 fixed + 10 * (5 production + 1 handling + 2 + 3 transport)
  CHECK(eval_cost(inst, sol) == doctest::Approx(260.0));
  // 10 * (2 production + 0.5 handling + 0.1 + 0.2 transport)
  CHECK(eval_emissions(inst, sol) == doctest::Approx(28.0));
  CHECK(eval_reliability(inst, sol) == doctest::Approx(10.0));

  auto v = evaluate(inst, sol);
  CHECK(v.total_cost == doctest::Approx(260.0));
  CHECK(v.total_co2 == doctest::Approx(28.0));
  CHECK(v.expected_dispatch == doctest::Approx(10.0));

  // Purity: identical calls return identical vectors.
  CHECK(evaluate(inst, sol) == v);
}

TEST_CASE("reliability weights dispatched units") {
  auto inst = tiny_chain_instance(100.0, 0.8);
  auto sol = tiny_chain_solution(inst);
  CHECK(eval_reliability(inst, sol) == doctest::Approx(80.0));
}

TEST_CASE("doubling flows doubles the variable part") {
  auto inst = tiny_chain_instance(10.0);
  for (auto& p : inst.plants) p.fixed_cost = 0.0;
  for (auto& w : inst.warehouses) w.fixed_cost = 0.0;
  auto sol = tiny_chain_solution(inst);
  double base_cost = eval_cost(inst, sol);
  double base_em = eval_emissions(inst, sol);
  double base_rel = eval_reliability(inst, sol);

  auto doubled = inst;
  doubled.scenarios[0].demand[0] *= 2.0;
  auto sol2 = tiny_chain_solution(doubled);
  CHECK(eval_cost(doubled, sol2) == doctest::Approx(2.0 * base_cost).epsilon(1e-12));
  CHECK(eval_emissions(doubled, sol2) == doctest::Approx(2.0 * base_em).epsilon(1e-12));
  CHECK(eval_reliability(doubled, sol2) == doctest::Approx(2.0 * base_rel).epsilon(1e-12));
}

TEST_CASE("emission scaling is linear in coefficients") {
  auto inst = tiny_chain_instance(10.0);
  auto sol = tiny_chain_solution(inst);
  double base = eval_emissions(inst, sol);

  auto scaled = inst;
  for (auto& p : scaled.plants) {
    p.production_emission *= 3.0;
    p.remanufacturing_emission *= 3.0;
  }
  for (auto& w : scaled.warehouses) w.handling_emission *= 3.0;
  for (auto& c : scaled.collection_centers) c.disassembly_emission *= 3.0;
  for (auto& d : scaled.disposal_sites) d.disposal_emission *= 3.0;
  for (ArcTable* t : {&scaled.plant_warehouse, &scaled.warehouse_customer,
                      &scaled.customer_collection, &scaled.collection_plant,
                      &scaled.collection_disposal})
    for (std::size_t r = 0; r < t->emission.rows(); ++r)
      for (std::size_t c = 0; c < t->emission.cols(); ++c) t->emission(r, c) *= 3.0;
  CHECK(eval_emissions(scaled, sol) == doctest::Approx(3.0 * base).epsilon(1e-12));
}

TEST_CASE("cost is monotone in any single unit cost coefficient") {
  auto inst = tiny_chain_instance(10.0);
  inst.alpha = 0.5;
  inst.beta = 0.5;
  Solution sol;
  sol.open_plants = {1};
  sol.open_warehouses = {1};
  sol.open_collection = {1};
  ScenarioFlows f;
  f.ya = Mat(1, 1, 10.0);
  f.yb = Mat(1, 1, 10.0);
  f.yc = Mat(1, 1, 5.0);
  f.yd = Mat(1, 1, 2.5);
  f.ye = Mat(1, 1, 2.5);
  sol.flows.push_back(f);
  REQUIRE(check_feasibility(inst, sol).feasible());

  double base = eval_cost(inst, sol);
  double base_em = eval_emissions(inst, sol);
  auto bump = [&](auto mutate) {
    auto copy = inst;
    mutate(copy);
    CHECK(eval_cost(copy, sol) >= base - 1e-12);
    CHECK(eval_emissions(copy, sol) >= base_em - 1e-12);
  };
  bump([](NetworkInstance& i) { i.plants[0].production_cost += 1.0; });
  bump([](NetworkInstance& i) { i.plants[0].remanufacturing_cost += 1.0; });
  bump([](NetworkInstance& i) { i.warehouses[0].handling_cost += 1.0; });
  bump([](NetworkInstance& i) { i.collection_centers[0].disassembly_cost += 1.0; });
  bump([](NetworkInstance& i) { i.disposal_sites[0].disposal_cost += 1.0; });
  bump([](NetworkInstance& i) { i.warehouse_customer.cost(0, 0) += 1.0; });
  bump([](NetworkInstance& i) { i.plants[0].production_emission += 1.0; });
  bump([](NetworkInstance& i) { i.warehouses[0].handling_emission += 1.0; });
  bump([](NetworkInstance& i) { i.customer_collection.emission(0, 0) += 1.0; });
}

TEST_CASE("remanufactured inflow offsets production one-for-one") {
  auto inst = tiny_chain_instance(10.0);
  inst.alpha = 0.5;
  inst.beta = 0.0;
  Solution sol;
  sol.open_plants = {1};
  sol.open_warehouses = {1};
  sol.open_collection = {1};
  ScenarioFlows f;
  f.ya = Mat(1, 1, 10.0);
  f.yb = Mat(1, 1, 10.0);
  f.yc = Mat(1, 1, 5.0);
  f.yd = Mat(1, 1, 0.0);
  f.ye = Mat(1, 1, 5.0);
  sol.flows.push_back(f);
  REQUIRE(check_feasibility(inst, sol).feasible());

  // production on max(0, 10 - 5) = 5 units at 5/unit; remanufacturing 5 at
  // 1/unit; handling 10; transports 2*10 + 3*10; collection transport 1*5;
  // disassembly 1*5; reman transport 1*5; fixed 100 + 50 + 30.
  double expected = 180.0 + 5.0 * 5.0 + 5.0 * 1.0 + 10.0 + 20.0 + 30.0 + 5.0 + 5.0 + 5.0;
  CHECK(eval_cost(inst, sol) == doctest::Approx(expected));
}

TEST_CASE("conservation closure over a feasible reverse solution") {
  auto inst = tiny_chain_instance(10.0);
  inst.alpha = 0.4;
  inst.beta = 0.25;
  Solution sol;
  sol.open_plants = {1};
  sol.open_warehouses = {1};
  sol.open_collection = {1};
  ScenarioFlows f;
  f.ya = Mat(1, 1, 10.0);
  f.yb = Mat(1, 1, 10.0);
  f.yc = Mat(1, 1, 4.0);
  f.yd = Mat(1, 1, 1.0);
  f.ye = Mat(1, 1, 3.0);
  sol.flows.push_back(f);
  REQUIRE(check_feasibility(inst, sol).feasible());

  double delivered = f.yb.total(), collected = f.yc.total();
  CHECK(collected == doctest::Approx(inst.alpha * delivered).epsilon(1e-9));
  CHECK(f.yd.total() == doctest::Approx(inst.beta * collected).epsilon(1e-9));
  CHECK(f.ye.total() == doctest::Approx((1.0 - inst.beta) * collected).epsilon(1e-9));
}

TEST_CASE("check_feasibility reports closed-facility shipping") {
  auto inst = tiny_chain_instance(10.0);
  auto sol = tiny_chain_solution(inst);
  sol.open_warehouses = {0};
  auto report = check_feasibility(inst, sol);
  REQUIRE(!report.feasible());
  bool found = false;
  for (const auto& v : report.violations)
    if (v.kind == "closed-facility") found = true;
  CHECK(found);
}

TEST_CASE("check_feasibility reports demand shortfall with magnitude") {
  auto inst = tiny_chain_instance(10.0);
  auto sol = tiny_chain_solution(inst);
  sol.flows[0].yb(0, 0) = 9.0;
  sol.flows[0].ya(0, 0) = 9.0;
  auto report = check_feasibility(inst, sol);
  REQUIRE(!report.feasible());
  bool found = false;
  for (const auto& v : report.violations)
    if (v.kind == "demand" && std::abs(v.magnitude - 1.0) < 1e-9) found = true;
  CHECK(found);
}

TEST_CASE("check_feasibility reports capacity and ratio breaches") {
  auto inst = tiny_chain_instance(10.0);
  inst.warehouses[0].capacity = 5.0;
  inst.plants[0].capacity = 100.0;
  auto sol = tiny_chain_solution(inst);
  auto report = check_feasibility(inst, sol);
  bool capacity = false;
  for (const auto& v : report.violations)
    if (v.kind == "capacity") capacity = true;
  CHECK(capacity);

  inst = tiny_chain_instance(10.0);
  inst.alpha = 0.5;
  auto sol2 = tiny_chain_solution(inst);  // ships nothing back
  auto report2 = check_feasibility(inst, sol2);
  bool ratio = false;
  for (const auto& v : report2.violations)
    if (v.kind == "return-ratio") ratio = true;
  CHECK(ratio);
}

TEST_CASE("evaluators reject infeasible solutions with a report") {
  auto inst = tiny_chain_instance(10.0);
  auto sol = tiny_chain_solution(inst);
  sol.flows[0].yb(0, 0) = 5.0;
  try {
    eval_cost(inst, sol);
    FAIL("expected InfeasibleSolutionError");
  } catch (const InfeasibleSolutionError& e) {
    CHECK(!e.report().feasible());
  }
}

TEST_CASE("reliability is bounded by expected demand") {
  for (double r : {0.25, 0.6, 1.0}) {
    auto inst = tiny_chain_instance(10.0, r);
    auto sol = tiny_chain_solution(inst);
    double expected_total = 10.0;
    CHECK(eval_reliability(inst, sol) <= expected_total + 1e-12);
    if (r == 1.0) CHECK(eval_reliability(inst, sol) == doctest::Approx(expected_total));
  }
}
