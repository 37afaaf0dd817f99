#include "clsc/cli.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace clsc {

namespace {

using nlohmann::json;

std::string num6(double v) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.6f", v);
  return std::string(buf.data());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write file: " + path);
  out << content;
  if (!out) throw std::ios_base::failure("failed writing file: " + path);
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& rows, std::size_t expected_rows, std::size_t expected_cols,
                  const std::string& name) {
  if (!rows.is_array() || rows.size() != expected_rows)
    throw std::invalid_argument("solutions.json: " + name + " has wrong row count");
  Mat m(expected_rows, expected_cols);
  for (std::size_t r = 0; r < expected_rows; ++r) {
    const json& row = rows.at(r);
    if (!row.is_array() || row.size() != expected_cols)
      throw std::invalid_argument("solutions.json: " + name + " has wrong column count");
    for (std::size_t c = 0; c < expected_cols; ++c) m(r, c) = row.at(c).get<double>();
  }
  return m;
}

std::string provenance_tag(const FrontPoint& point) {
  bool ga = false, wsum = false;
  for (const auto& prov : point.provenance) {
    if (prov.method == "ga") ga = true;
    if (prov.method == "wsum") wsum = true;
  }
  if (ga && wsum) return "ga;wsum";
  if (wsum) return "wsum";
  return "ga";
}

// Reference for reporting: the coordinate-wise worst canonical value over the
// points, pushed 10% further from the ideal.
std::array<double, 3> report_reference(const std::vector<ObjectiveVector>& points) {
  std::array<double, 3> worst{0.0, 0.0, 0.0};
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

}  // namespace

std::string front_csv(const ParetoFront& front, const std::string& method) {
  std::string out = "solution_id,method,total_cost,total_co2,expected_dispatch\n";
  for (std::size_t i = 0; i < front.points().size(); ++i) {
    const auto& o = front.points()[i].objectives;
    out += std::to_string(i) + "," + method + "," + num6(o.total_cost) + "," +
           num6(o.total_co2) + "," + num6(o.expected_dispatch) + "\n";
  }
  return out;
}

std::string sweep_csv(const ParetoFront& front) {
  std::string out = "solution_id,w_cost,w_co2,w_dispatch,total_cost,total_co2,expected_dispatch\n";
  for (std::size_t i = 0; i < front.points().size(); ++i) {
    const auto& point = front.points()[i];
    const auto& o = point.objectives;
    std::array<double, 3> w{0.0, 0.0, 0.0};
    for (const auto& prov : point.provenance)
      if (prov.has_weights) {
        w = prov.weights;
        break;
      }
    out += std::to_string(i) + "," + num6(w[0]) + "," + num6(w[1]) + "," + num6(w[2]) + "," +
           num6(o.total_cost) + "," + num6(o.total_co2) + "," + num6(o.expected_dispatch) + "\n";
  }
  return out;
}

std::string stats_csv(const std::vector<GenerationStats>& stats) {
  std::string out = "generation,archive_size,hypervolume,best_cost,best_co2,best_dispatch\n";
  for (const auto& s : stats)
    out += std::to_string(s.generation) + "," + std::to_string(s.archive_size) + "," +
           num6(s.hypervolume) + "," + num6(s.best_cost) + "," + num6(s.best_co2) + "," +
           num6(s.best_dispatch) + "\n";
  return out;
}

std::string compare_csv(const ParetoFront& merged_front) {
  std::string out = "solution_id,method,total_cost,total_co2,expected_dispatch\n";
  for (std::size_t i = 0; i < merged_front.points().size(); ++i) {
    const auto& point = merged_front.points()[i];
    const auto& o = point.objectives;
    out += std::to_string(i) + "," + provenance_tag(point) + "," + num6(o.total_cost) + "," +
           num6(o.total_co2) + "," + num6(o.expected_dispatch) + "\n";
  }
  return out;
}

std::string solutions_json(const NetworkInstance& inst, const ParetoFront& front,
                           const std::string& method) {
  json doc;
  doc["method"] = method;
  json solutions = json::array();
  for (std::size_t i = 0; i < front.points().size(); ++i) {
    const auto& point = front.points()[i];
    json entry;
    entry["solution_id"] = i;
    entry["objectives"] = {{"total_cost", point.objectives.total_cost},
                           {"total_co2", point.objectives.total_co2},
                           {"expected_dispatch", point.objectives.expected_dispatch}};

    json provenance = json::array();
    for (const auto& prov : point.provenance) {
      json p;
      p["method"] = prov.method;
      if (prov.has_weights)
        p["weights"] = {prov.weights[0], prov.weights[1], prov.weights[2]};
      if (prov.generation >= 0) p["generation"] = prov.generation;
      provenance.push_back(std::move(p));
    }
    entry["provenance"] = std::move(provenance);

    auto open_ids = [](const auto& facilities, const std::vector<std::uint8_t>& open) {
      json ids = json::array();
      for (std::size_t f = 0; f < facilities.size(); ++f)
        if (open[f]) ids.push_back(facilities[f].id);
      return ids;
    };
    entry["open_plants"] = open_ids(inst.plants, point.solution.open_plants);
    entry["open_warehouses"] = open_ids(inst.warehouses, point.solution.open_warehouses);
    entry["open_collection"] = open_ids(inst.collection_centers, point.solution.open_collection);

    json flows = json::array();
    for (const auto& f : point.solution.flows)
      flows.push_back({{"Ya", mat_to_json(f.ya)},
                       {"Yb", mat_to_json(f.yb)},
                       {"Yc", mat_to_json(f.yc)},
                       {"Yd", mat_to_json(f.yd)},
                       {"Ye", mat_to_json(f.ye)}});
    entry["flows"] = std::move(flows);
    solutions.push_back(std::move(entry));
  }
  doc["solutions"] = std::move(solutions);
  return doc.dump(2) + "\n";
}

std::vector<ParsedSolution> parse_solutions_json(const NetworkInstance& inst,
                                                 const std::string& text) {
  const json doc = json::parse(text);
  const std::size_t P = inst.num_plants(), W = inst.num_warehouses(), C = inst.num_customers(),
                    L = inst.num_collection(), M = inst.num_disposal();

  auto open_from_ids = [](const auto& facilities, const json& ids) {
    std::vector<std::uint8_t> open(facilities.size(), 0);
    for (const auto& id : ids) {
      bool found = false;
      for (std::size_t f = 0; f < facilities.size(); ++f)
        if (facilities[f].id == id.template get<std::string>()) {
          open[f] = 1;
          found = true;
          break;
        }
      if (!found)
        throw std::invalid_argument("solutions.json: unknown facility id " +
                                    id.template get<std::string>());
    }
    return open;
  };

  std::vector<ParsedSolution> out;
  for (const auto& entry : doc.at("solutions")) {
    ParsedSolution parsed;
    parsed.objectives.total_cost = entry.at("objectives").at("total_cost").get<double>();
    parsed.objectives.total_co2 = entry.at("objectives").at("total_co2").get<double>();
    parsed.objectives.expected_dispatch =
        entry.at("objectives").at("expected_dispatch").get<double>();
    parsed.solution.open_plants = open_from_ids(inst.plants, entry.at("open_plants"));
    parsed.solution.open_warehouses = open_from_ids(inst.warehouses, entry.at("open_warehouses"));
    parsed.solution.open_collection =
        open_from_ids(inst.collection_centers, entry.at("open_collection"));
    for (const auto& f : entry.at("flows")) {
      ScenarioFlows flows;
      flows.ya = mat_from_json(f.at("Ya"), P, W, "Ya");
      flows.yb = mat_from_json(f.at("Yb"), W, C, "Yb");
      flows.yc = mat_from_json(f.at("Yc"), C, L, "Yc");
      flows.yd = mat_from_json(f.at("Yd"), L, M, "Yd");
      flows.ye = mat_from_json(f.at("Ye"), L, P, "Ye");
      parsed.solution.flows.push_back(std::move(flows));
    }
    out.push_back(std::move(parsed));
  }
  return out;
}

namespace {

NetworkInstance load_validated(const std::string& path, std::ostream& out, int& exit_code) {
  NetworkInstance inst = load_instance_file(path);  // may throw ios/json errors
  auto errors = validate_instance(inst);
  if (!errors.empty()) {
    out << "instance is invalid:\n";
    for (const auto& e : errors) out << "  - " << e << "\n";
    exit_code = kExitInvalid;
  }
  return inst;
}

}  // namespace

int cmd_validate(const std::string& instance_path, std::ostream& out) {
  int exit_code = kExitOk;
  load_validated(instance_path, out, exit_code);
  if (exit_code == kExitOk) out << "instance is valid\n";
  return exit_code;
}

int cmd_gen_instance(const std::string& template_name, std::uint64_t seed,
                     const std::string& out_path, std::ostream& out) {
  NetworkInstance inst;
  if (template_name == "tabletop")
    inst = make_tabletop(seed);
  else if (template_name == "oracle-tiny")
    inst = make_oracle_tiny(seed);
  else
    throw std::invalid_argument("unknown template \"" + template_name +
                                "\" (expected tabletop or oracle-tiny)");
  save_instance_file(inst, out_path);
  out << "wrote " << template_name << " instance to " << out_path << "\n";
  return kExitOk;
}

int cmd_solve(const SolveOptions& opt, std::ostream& out) {
  int exit_code = kExitOk;
  NetworkInstance inst = load_validated(opt.instance_path, out, exit_code);
  if (exit_code != kExitOk) return exit_code;

  std::filesystem::create_directories(opt.out_dir);
  ParetoFront front;
  std::string stats_payload;

  if (opt.method == "nsga2") {
    GaConfig cfg = opt.ga;
    cfg.threads = opt.threads;
    GaResult result = run_nsga2(inst, cfg);
    front = std::move(result.front);
    stats_payload = stats_csv(result.stats);
  } else if (opt.method == "wsum") {
    front = sweep_weights(inst, opt.grid, opt.threads);
  } else {
    throw std::invalid_argument("unknown method \"" + opt.method +
                                "\" (expected nsga2 or wsum)");
  }

  front.sort_canonical();
  write_file(opt.out_dir + "/front.csv", front_csv(front, opt.method));
  write_file(opt.out_dir + "/solutions.json", solutions_json(inst, front, opt.method));
  if (opt.method == "nsga2") write_file(opt.out_dir + "/stats.csv", stats_payload);
  if (opt.method == "wsum") write_file(opt.out_dir + "/sweep.csv", sweep_csv(front));

  double hv = front.empty()
                  ? 0.0
                  : hypervolume_clipped(front.objectives(), report_reference(front.objectives()));
  out << "front size: " << front.size() << "\n";
  out << "hypervolume (front-derived reference): " << num6(hv) << "\n";
  return kExitOk;
}

int cmd_compare(const SolveOptions& opt, std::ostream& out) {
  int exit_code = kExitOk;
  NetworkInstance inst = load_validated(opt.instance_path, out, exit_code);
  if (exit_code != kExitOk) return exit_code;

  std::filesystem::create_directories(opt.out_dir);

  GaConfig cfg = opt.ga;
  cfg.threads = opt.threads;
  GaResult ga = run_nsga2(inst, cfg);
  ParetoFront ws = sweep_weights(inst, opt.grid, opt.threads);
  ParetoFront merged = ParetoFront::merged(ga.front, ws);
  merged.sort_canonical();

  auto ga_objectives = ga.front.objectives();
  auto ws_objectives = ws.objectives();
  auto union_objectives = merged.objectives();
  auto reference = report_reference(union_objectives);

  double hv_ga = hypervolume_clipped(ga_objectives, reference);
  double hv_ws = hypervolume_clipped(ws_objectives, reference);
  double hv_union = hypervolume_clipped(union_objectives, reference);
  double c_ga_ws = coverage(ga_objectives, ws_objectives);
  double c_ws_ga = coverage(ws_objectives, ga_objectives);

  NormalizationBounds bounds = compute_bounds(inst);
  ObjectiveVector utopia{bounds.utopia[0], bounds.utopia[1], -bounds.utopia[2]};

  write_file(opt.out_dir + "/compare.csv", compare_csv(merged));

  json summary;
  summary["hypervolume"] = {{"ga", hv_ga}, {"wsum", hv_ws}, {"union", hv_union}};
  summary["coverage"] = {{"ga_over_wsum", c_ga_ws}, {"wsum_over_ga", c_ws_ga}};
  summary["reference"] = {reference[0], reference[1], reference[2]};
  summary["utopia"] = {{"total_cost", utopia.total_cost},
                       {"total_co2", utopia.total_co2},
                       {"expected_dispatch", utopia.expected_dispatch}};
  summary["front_sizes"] = {{"ga", ga.front.size()}, {"wsum", ws.size()}, {"union", merged.size()}};
  write_file(opt.out_dir + "/summary.json", summary.dump(2) + "\n");

  out << "GA front: " << ga.front.size() << " points, hypervolume " << num6(hv_ga) << "\n";
  out << "weighted-sum front: " << ws.size() << " points, hypervolume " << num6(hv_ws) << "\n";
  out << "union front: " << merged.size() << " points, hypervolume " << num6(hv_union) << "\n";
  out << "coverage C(GA, WS): " << num6(c_ga_ws) << "\n";
  out << "coverage C(WS, GA): " << num6(c_ws_ga) << "\n";
  out << "utopia point: cost " << num6(utopia.total_cost) << ", co2 " << num6(utopia.total_co2)
      << ", dispatch " << num6(utopia.expected_dispatch) << "\n";
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"closed-loop supply chain network design solver"};
  app.require_subcommand(1);

  std::string instance_path, template_name, out_path, out_dir, method;
  std::uint64_t seed = 42;
  SolveOptions opt;

  auto* validate = app.add_subcommand("validate", "check an instance file");
  validate->add_option("--instance", instance_path, "instance JSON path")->required();

  auto* gen = app.add_subcommand("gen-instance", "write a bundled instance template");
  gen->add_option("--template", template_name, "tabletop or oracle-tiny")->required();
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--out", out_path, "output path")->required();

  auto add_solver_options = [&](CLI::App* cmd, bool with_method) {
    cmd->add_option("--instance", opt.instance_path, "instance JSON path")->required();
    if (with_method)
      cmd->add_option("--method", opt.method, "nsga2 or wsum")->required();
    cmd->add_option("--out", opt.out_dir, "output directory")->required();
    cmd->add_option("--seed", opt.ga.seed, "random seed");
    cmd->add_option("--pop", opt.ga.population_size, "GA population size");
    cmd->add_option("--gens", opt.ga.max_generations, "GA generations");
    cmd->add_option("--pc", opt.ga.crossover_rate, "SBX per-gene rate");
    cmd->add_option("--pm", opt.ga.mutation_rate, "mutation per-gene rate");
    cmd->add_option("--eta-c", opt.ga.sbx_eta, "SBX distribution index");
    cmd->add_option("--eta-m", opt.ga.mutation_eta, "mutation distribution index");
    cmd->add_option("--grid", opt.grid, "weight grid resolution");
    cmd->add_option("--threads", opt.threads, "evaluation threads");
  };
  auto* solve = app.add_subcommand("solve", "run one solver");
  add_solver_options(solve, true);
  auto* compare = app.add_subcommand("compare", "run both solvers and compare fronts");
  add_solver_options(compare, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitIo;
  }

  try {
    if (validate->parsed()) return cmd_validate(instance_path, out);
    if (gen->parsed()) return cmd_gen_instance(template_name, seed, out_path, out);
    if (solve->parsed()) return cmd_solve(opt, out);
    if (compare->parsed()) return cmd_compare(opt, out);
    err << "no subcommand\n";
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const TractabilityError& e) {
    err << "tractability error: " << e.what() << "\n";
    return kExitIntractable;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace clsc
