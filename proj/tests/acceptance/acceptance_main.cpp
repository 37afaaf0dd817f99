// Acceptance suite: one binary, one pass/fail line per criterion.
// Each criterion pins its tolerances and runtime budget in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "clsc/cli.hpp"
#include "clsc/instance_io.hpp"
#include "clsc/moga.hpp"
#include "clsc/scalarize.hpp"
#include "../enumeration_oracle.hpp"

using namespace clsc;
using namespace clsc::testing;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kInstanceSeed = 42;
constexpr std::uint64_t kGaSeed = 42;

struct Shared {
  NetworkInstance oracle = make_oracle_tiny(kInstanceSeed);
  NetworkInstance tabletop = make_tabletop(kInstanceSeed);

  std::vector<EnumeratedSolution> enumerated;      // oracle-tiny, integer grid
  std::vector<ObjectiveVector> true_front;         // non-dominated set of the above
  GaResult oracle_ga;                              // pop 40, 100 generations

  GaResult tabletop_ga;                            // pop 100, 200 generations
  std::vector<std::vector<ObjectiveVector>> tabletop_archive_history;
  ParetoFront tabletop_sweep;                      // g = 10
  double tabletop_runtime_seconds = 0.0;
};

std::array<double, 3> spread_reference(const std::vector<ObjectiveVector>& points) {
  std::array<double, 3> worst{};
  bool first = true;
  for (const auto& p : points) {
    auto c = canonicalize(p);
    for (int o = 0; o < 3; ++o) worst[o] = first ? c[o] : std::max(worst[o], c[o]);
    first = false;
  }
  std::array<double, 3> ref{};
  for (int o = 0; o < 3; ++o) ref[o] = worst[o] + 0.1 * std::max(std::abs(worst[o]), 1e-9);
  return ref;
}

bool weakly_dominates_within(const ObjectiveVector& a, const ObjectiveVector& b,
                             double relative_tol) {
  auto ca = canonicalize(a), cb = canonicalize(b);
  for (int o = 0; o < 3; ++o)
    if (ca[o] > cb[o] + relative_tol * std::abs(cb[o])) return false;
  return true;
}

const std::vector<WeightVector> kElevenWeights = {
    {1.0, 0.0, 0.0},         {0.0, 1.0, 0.0},         {0.0, 0.0, 1.0},
    {2.0 / 3, 1.0 / 3, 0.0}, {2.0 / 3, 0.0, 1.0 / 3}, {1.0 / 3, 2.0 / 3, 0.0},
    {0.0, 2.0 / 3, 1.0 / 3}, {1.0 / 3, 0.0, 2.0 / 3}, {0.0, 1.0 / 3, 2.0 / 3},
    {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.4, 0.3, 0.3}};

// --- criteria -------------------------------------------------------------

bool oracle_pareto_recovery(Shared& sh, std::string& detail) {
  sh.enumerated = enumerate_solutions(sh.oracle, 1.0);
  std::vector<ObjectiveVector> all;
  all.reserve(sh.enumerated.size());
  for (const auto& e : sh.enumerated) all.push_back(e.objectives);
  for (auto idx : nondominated_indices(all)) sh.true_front.push_back(all[idx]);

  GaConfig cfg;
  cfg.population_size = 40;
  cfg.max_generations = 100;
  cfg.seed = kGaSeed;
  sh.oracle_ga = run_nsga2(sh.oracle, cfg);

  std::size_t unmatched = 0;
  for (const auto& p : sh.oracle_ga.front.points()) {
    auto c = canonicalize(p.objectives);
    bool matched = false;
    for (const auto& t : sh.true_front) {
      auto ct = canonicalize(t);
      if (std::abs(c[0] - ct[0]) <= 1e-9 && std::abs(c[1] - ct[1]) <= 1e-9 &&
          std::abs(c[2] - ct[2]) <= 1e-9) {
        matched = true;
        break;
      }
    }
    if (!matched) ++unmatched;
  }

  auto union_points = sh.true_front;
  for (const auto& p : sh.oracle_ga.front.points()) union_points.push_back(p.objectives);
  auto ref = spread_reference(union_points);
  double hv_true = hypervolume_clipped(sh.true_front, ref);
  double hv_ga = hypervolume_clipped(sh.oracle_ga.front.objectives(), ref);

  std::ostringstream os;
  os << "enumerated " << sh.enumerated.size() << " assignments, true front "
     << sh.true_front.size() << ", archive " << sh.oracle_ga.front.size() << ", unmatched "
     << unmatched << ", hv ratio " << (hv_ga / hv_true);
  detail = os.str();
  return unmatched == 0 && hv_ga >= 0.99 * hv_true;
}

bool exact_solver_optimality(Shared& sh, std::string& detail) {
  auto bounds = compute_bounds(sh.oracle);
  double worst_gap = -std::numeric_limits<double>::infinity();
  for (const auto& w : kElevenWeights) {
    auto result = solve_weighted_exact(sh.oracle, w, bounds);
    double oracle_min = std::numeric_limits<double>::infinity();
    for (const auto& e : sh.enumerated)
      oracle_min = std::min(oracle_min, scalarize(w, e.objectives, bounds));
    double gap = (result.scalarized - oracle_min) / std::max(1.0, std::abs(oracle_min));
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-6) {
      std::ostringstream os;
      os << "weight (" << w.cost << ", " << w.co2 << ", " << w.dispatch << ") exceeds the "
         << "enumeration minimum by relative " << gap;
      detail = os.str();
      return false;
    }
  }
  std::ostringstream os;
  os << "11 weight vectors within 1e-6 of the enumeration minimum (worst relative gap "
     << worst_gap << ")";
  detail = os.str();
  return true;
}

bool cross_method_consistency(Shared& sh, std::string& detail) {
  auto start = std::chrono::steady_clock::now();
  GaConfig cfg;
  cfg.population_size = 100;
  cfg.max_generations = 200;
  cfg.seed = kGaSeed;
  sh.tabletop_ga = run_nsga2(sh.tabletop, cfg, [&](std::size_t, const Archive& archive) {
    sh.tabletop_archive_history.push_back(archive.objectives());
  });
  sh.tabletop_sweep = sweep_weights(sh.tabletop, 10);
  sh.tabletop_runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  auto ga_points = sh.tabletop_ga.front.objectives();
  std::size_t uncovered = 0;
  for (const auto& wp : sh.tabletop_sweep.points()) {
    bool covered = false;
    for (const auto& g : ga_points)
      if (weakly_dominates_within(g, wp.objectives, 0.01)) {
        covered = true;
        break;
      }
    if (!covered) ++uncovered;
  }
  double coverage_tol = 1.0 - static_cast<double>(uncovered) /
                                  static_cast<double>(sh.tabletop_sweep.size());
  std::ostringstream os;
  os << "GA front " << sh.tabletop_ga.front.size() << ", sweep " << sh.tabletop_sweep.size()
     << " points, tolerant C(GA, WS) = " << coverage_tol;
  detail = os.str();
  return uncovered == 0;
}

bool feasibility_fuzz(Shared& sh, std::string& detail) {
  const GenotypeLayout lay = GenotypeLayout::of(sh.tabletop);
  Rng rng(kGaSeed);
  std::size_t violations = 0;
  const std::size_t trials = 100000;
  for (std::size_t t = 0; t < trials; ++t) {
    Genotype g(lay.size());
    for (double& gene : g) gene = rng.uniform();
    auto report = check_feasibility(sh.tabletop, decode(g, sh.tabletop));
    violations += report.violations.size();
  }
  std::ostringstream os;
  os << trials << " random genotypes decoded, " << violations << " violations";
  detail = os.str();
  return violations == 0;
}

bool operator_properties(std::string& detail) {
  Rng rng(kGaSeed);
  double worst_sum_gap = 0.0;
  bool bounds_ok = true;
  for (int trial = 0; trial < 10000; ++trial) {
    double p1 = rng.uniform(), p2 = rng.uniform(), u = rng.uniform();
    auto [c1, c2] = sbx_gene(p1, p2, u, 15.0);
    worst_sum_gap = std::max(worst_sum_gap, std::abs((c1 + c2) - (p1 + p2)));
    double m1 = std::clamp(c1, 0.0, 1.0), m2 = std::clamp(c2, 0.0, 1.0);
    if (m1 < 0.0 || m1 > 1.0 || m2 < 0.0 || m2 > 1.0) bounds_ok = false;
    double y = polynomial_mutation_gene(rng.uniform(), rng.uniform(), 20.0);
    if (y < 0.0 || y > 1.0) bounds_ok = false;
  }
  bool midpoint_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    double p1 = rng.uniform(), p2 = rng.uniform();
    auto [c1, c2] = sbx_gene(p1, p2, 0.5, 15.0);
    if (std::abs(c1 - p1) > 1e-12 || std::abs(c2 - p2) > 1e-12) midpoint_ok = false;
  }
  std::ostringstream os;
  os << "worst pre-clamp sum deviation " << worst_sum_gap << ", bounds "
     << (bounds_ok ? "held" : "violated") << ", u=0.5 identity "
     << (midpoint_ok ? "held" : "violated");
  detail = os.str();
  return worst_sum_gap <= 1e-12 && bounds_ok && midpoint_ok;
}

bool archive_invariants(Shared& sh, std::string& detail) {
  if (sh.tabletop_archive_history.empty()) {
    detail = "tabletop run unavailable";
    return false;
  }
  for (const auto& snapshot : sh.tabletop_archive_history) {
    if (nondominated_indices(snapshot).size() != snapshot.size()) {
      detail = "archive contained a dominated point";
      return false;
    }
  }
  const auto& stats = sh.tabletop_ga.stats;
  for (std::size_t i = 1; i < stats.size(); ++i)
    if (stats[i].hypervolume < stats[i - 1].hypervolume - 1e-9) {
      detail = "archive hypervolume decreased at generation " + std::to_string(i);
      return false;
    }
  std::ostringstream os;
  os << stats.size() << " generations checked (pairwise non-domination, frozen-reference "
     << "hypervolume non-decreasing)";
  detail = os.str();
  return true;
}

bool determinism(Shared& sh, std::string& detail) {
  auto dir = fs::temp_directory_path() / "clsc_acceptance";
  fs::create_directories(dir);
  auto instance_path = (dir / "tabletop.json").string();
  save_instance_file(sh.tabletop, instance_path);

  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };

  std::vector<std::array<std::string, 3>> outputs;
  int run_id = 0;
  for (std::size_t threads : {1u, 4u, 1u, 4u}) {
    SolveOptions opt;
    opt.instance_path = instance_path;
    opt.method = "nsga2";
    opt.out_dir = (dir / ("run" + std::to_string(run_id++))).string();
    opt.ga.population_size = 40;
    opt.ga.max_generations = 40;
    opt.ga.seed = kGaSeed;
    opt.threads = threads;
    std::ostringstream sink;
    if (cmd_solve(opt, sink) != kExitOk) {
      detail = "cmd_solve failed";
      return false;
    }
    outputs.push_back({read(fs::path(opt.out_dir) / "front.csv"),
                       read(fs::path(opt.out_dir) / "solutions.json"),
                       read(fs::path(opt.out_dir) / "stats.csv")});
  }
  for (std::size_t i = 1; i < outputs.size(); ++i)
    if (outputs[i] != outputs[0]) {
      detail = "outputs differ between runs (threads in {1,4})";
      return false;
    }
  detail = "4 runs (threads 1/4, twice each) produced byte-identical front.csv, "
           "solutions.json, stats.csv";
  return true;
}

bool indicator_correctness(std::string& detail) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coord(0, 8);
  std::uniform_int_distribution<int> count(1, 4);

  for (int trial = 0; trial < 200; ++trial) {
    int n = count(rng);
    std::vector<std::array<double, 3>> pts;
    for (int i = 0; i < n; ++i)
      pts.push_back({double(coord(rng)), double(coord(rng)), double(coord(rng))});
    std::array<double, 3> ref{10.0, 10.0, 10.0};

    long cells = 0;
    for (int x = 0; x < 10; ++x)
      for (int y = 0; y < 10; ++y)
        for (int z = 0; z < 10; ++z)
          for (const auto& p : pts)
            if (p[0] <= x && p[1] <= y && p[2] <= z) {
              ++cells;
              break;
            }
    double hv = hypervolume(pts, ref);
    if (std::abs(hv - static_cast<double>(cells)) > 1e-9) {
      std::ostringstream os;
      os << "hypervolume " << hv << " != grid count " << cells;
      detail = os.str();
      return false;
    }
  }

  std::uniform_real_distribution<double> real(0.0, 10.0);
  std::vector<ObjectiveVector> pts;
  for (int i = 0; i < 200; ++i) pts.push_back({real(rng), real(rng), real(rng)});

  auto filtered = nondominated_indices(pts);
  std::vector<std::size_t> scan;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (i != j && dominates(pts[j], pts[i])) dominated = true;
    if (!dominated) scan.push_back(i);
  }
  if (filtered != scan) {
    detail = "nondominated filter disagrees with the pairwise scan";
    return false;
  }

  auto sorted = fast_nondominated_sort(pts);
  std::vector<std::size_t> remaining(pts.size());
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});
  int rank = 0;
  while (!remaining.empty()) {
    std::vector<ObjectiveVector> sub;
    for (auto idx : remaining) sub.push_back(pts[idx]);
    auto keep = nondominated_indices(sub);
    std::vector<std::size_t> next;
    std::vector<bool> in_front(remaining.size(), false);
    for (auto k : keep) in_front[k] = true;
    for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
      if (in_front[pos]) {
        if (sorted.rank[remaining[pos]] != rank) {
          detail = "fast_nondominated_sort disagrees with the peeling oracle";
          return false;
        }
      } else {
        next.push_back(remaining[pos]);
      }
    }
    remaining = std::move(next);
    ++rank;
  }
  detail = "hypervolume matches the integer-grid oracle on 200 fronts; filter and sort match "
           "their oracles on 200 random points";
  return true;
}

bool table_mirror(Shared& sh, std::string& detail) {
  std::vector<const ParetoFront*> fronts = {&sh.tabletop_ga.front, &sh.tabletop_sweep};
  std::size_t checked = 0;
  for (const ParetoFront* front : fronts) {
    for (const auto& point : front->points()) {
      for (const auto& f : point.solution.flows) {
        double delivered = f.yb.total(), collected = f.yc.total(), disposed = f.yd.total();
        double scale = std::max(1.0, delivered);
        if (std::abs(collected - 0.2 * delivered) > 1e-9 * scale ||
            std::abs(disposed - 0.1 * collected) > 1e-9 * scale) {
          detail = "flow ratios broken on an emitted solution";
          return false;
        }
        ++checked;
      }
    }
  }
  auto text = solutions_json(sh.tabletop, sh.tabletop_ga.front, "nsga2");
  for (const char* key : {"\"Ya\"", "\"Yb\"", "\"Yc\"", "\"Yd\"", "\"Ye\""})
    if (text.find(key) == std::string::npos) {
      detail = std::string("solutions.json is missing key ") + key;
      return false;
    }
  std::ostringstream os;
  os << checked << " scenario flow plans satisfy collected = 0.2 * delivered and disposed = "
     << "0.1 * collected; Ya..Ye naming present";
  detail = os.str();
  return true;
}

}  // namespace

int main() {
  Shared sh;
  int failures = 0;
  double budget_overruns = 0;

  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<bool(std::string&)> run;
  };

  std::vector<Criterion> criteria = {
      {1, "oracle Pareto recovery", 10.0,
       [&](std::string& d) { return oracle_pareto_recovery(sh, d); }},
      {2, "exact-solver optimality", 5.0,
       [&](std::string& d) { return exact_solver_optimality(sh, d); }},
      {3, "cross-method consistency", 60.0,
       [&](std::string& d) { return cross_method_consistency(sh, d); }},
      {4, "feasibility fuzz", 30.0, [&](std::string& d) { return feasibility_fuzz(sh, d); }},
      {5, "operator properties", 30.0, [&](std::string& d) { return operator_properties(d); }},
      {6, "archive invariants", 30.0, [&](std::string& d) { return archive_invariants(sh, d); }},
      {7, "determinism", 120.0, [&](std::string& d) { return determinism(sh, d); }},
      {8, "indicator correctness", 30.0,
       [&](std::string& d) { return indicator_correctness(d); }},
      {9, "flow-ratio structural mirror", 30.0,
       [&](std::string& d) { return table_mirror(sh, d); }},
  };

  for (auto& criterion : criteria) {
    std::string detail;
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool on_budget = elapsed <= criterion.budget_seconds;
    if (!on_budget) ++budget_overruns;
    if (!ok || !on_budget) ++failures;
    std::printf("%s [%d] %s (%.2fs, budget %.0fs): %s\n", (ok && on_budget) ? "PASS" : "FAIL",
                criterion.id, criterion.name, elapsed, criterion.budget_seconds,
                detail.c_str());
  }

  if (failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
