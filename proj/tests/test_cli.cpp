#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "clsc/cli.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace clsc;
using namespace clsc::testing;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  auto dir = fs::temp_directory_path() / "clsc_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int run(std::initializer_list<const char*> args, std::string* capture = nullptr) {
  std::vector<const char*> argv = {"clsc"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (capture) *capture = out.str() + err.str();
  return code;
}

}  // namespace

TEST_CASE("gen-instance is byte-deterministic and validates") {
  auto dir = temp_dir();
  auto p1 = (dir / "a.json").string();
  auto p2 = (dir / "b.json").string();
  CHECK(run({"gen-instance", "--template", "tabletop", "--seed", "9", "--out", p1.c_str()}) ==
        kExitOk);
  CHECK(run({"gen-instance", "--template", "tabletop", "--seed", "9", "--out", p2.c_str()}) ==
        kExitOk);
  CHECK(read_file(p1) == read_file(p2));
  CHECK(run({"validate", "--instance", p1.c_str()}) == kExitOk);

  auto p3 = (dir / "c.json").string();
  CHECK(run({"gen-instance", "--template", "oracle-tiny", "--seed", "9", "--out", p3.c_str()}) ==
        kExitOk);
  CHECK(run({"validate", "--instance", p3.c_str()}) == kExitOk);
  CHECK(read_file(p1) != read_file(p3));

  CHECK(run({"gen-instance", "--template", "nope", "--out", p3.c_str()}) == kExitInvalid);
}

TEST_CASE("validate exit codes distinguish parse and domain failures") {
  auto dir = temp_dir();
  CHECK(run({"validate", "--instance", (dir / "missing.json").string().c_str()}) == kExitIo);

  auto truncated = dir / "truncated.json";
  {
    std::ofstream out(truncated);
    out << "{\"plants\": [";
  }
  std::string message;
  CHECK(run({"validate", "--instance", truncated.string().c_str()}, &message) == kExitIo);
  CHECK(message.find("parse error") != std::string::npos);

  auto bad = dir / "bad_probabilities.json";
  auto inst = make_oracle_tiny(1);
  inst.scenarios = {{0.5, {4.0, 2.0}}, {0.4, {4.0, 2.0}}};
  save_instance_file(inst, bad.string());
  CHECK(run({"validate", "--instance", bad.string().c_str()}, &message) == kExitInvalid);
  CHECK(message.find("0.9") != std::string::npos);
}

TEST_CASE("instance JSON round-trips") {
  auto inst = make_tabletop(4);
  auto text = instance_to_json(inst);
  auto parsed = parse_instance(text);
  CHECK(instance_to_json(parsed) == text);
}

TEST_CASE("solve writes deterministic outputs with the exact headers") {
  auto dir = temp_dir();
  auto instance = (dir / "solve_inst.json").string();
  REQUIRE(run({"gen-instance", "--template", "oracle-tiny", "--seed", "3", "--out",
               instance.c_str()}) == kExitOk);

  auto out1 = (dir / "run1").string();
  auto out2 = (dir / "run2").string();
  for (const auto& out : {out1, out2})
    REQUIRE(run({"solve", "--instance", instance.c_str(), "--method", "nsga2", "--pop", "16",
                 "--gens", "10", "--seed", "7", "--out", out.c_str()}) == kExitOk);

  auto front1 = read_file(fs::path(out1) / "front.csv");
  CHECK(front1 == read_file(fs::path(out2) / "front.csv"));
  CHECK(read_file(fs::path(out1) / "solutions.json") ==
        read_file(fs::path(out2) / "solutions.json"));
  CHECK(read_file(fs::path(out1) / "stats.csv") == read_file(fs::path(out2) / "stats.csv"));

  CHECK(front1.rfind("solution_id,method,total_cost,total_co2,expected_dispatch\n", 0) == 0);
  auto stats = read_file(fs::path(out1) / "stats.csv");
  CHECK(stats.rfind("generation,archive_size,hypervolume,best_cost,best_co2,best_dispatch\n",
                    0) == 0);
}

TEST_CASE("wsum solve emits the corner solutions at g=1") {
  auto dir = temp_dir();
  auto instance = (dir / "wsum_inst.json").string();
  REQUIRE(run({"gen-instance", "--template", "oracle-tiny", "--seed", "3", "--out",
               instance.c_str()}) == kExitOk);
  auto out = (dir / "wsum_run").string();
  REQUIRE(run({"solve", "--instance", instance.c_str(), "--method", "wsum", "--grid", "1",
               "--out", out.c_str()}) == kExitOk);
  auto front = read_file(fs::path(out) / "front.csv");
  std::size_t rows = static_cast<std::size_t>(std::count(front.begin(), front.end(), '\n')) - 1;
  CHECK(rows >= 1);
  CHECK(rows <= 3);
  CHECK(fs::exists(fs::path(out) / "sweep.csv"));
  CHECK(!fs::exists(fs::path(out) / "stats.csv"));
}

TEST_CASE("solutions.json round-trips exactly and stays feasible") {
  auto inst = make_oracle_tiny(3);
  GaConfig cfg;
  cfg.population_size = 16;
  cfg.max_generations = 8;
  cfg.seed = 7;
  auto result = run_nsga2(inst, cfg);
  result.front.sort_canonical();

  auto text = solutions_json(inst, result.front, "nsga2");
  auto parsed = parse_solutions_json(inst, text);
  REQUIRE(parsed.size() == result.front.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i].solution == result.front.points()[i].solution);
    CHECK(parsed[i].objectives == result.front.points()[i].objectives);
    CHECK(check_feasibility(inst, parsed[i].solution).feasible());
  }
  CHECK(text.find("\"Ya\"") != std::string::npos);
  CHECK(text.find("\"Yb\"") != std::string::npos);
  CHECK(text.find("\"Yc\"") != std::string::npos);
  CHECK(text.find("\"Yd\"") != std::string::npos);
  CHECK(text.find("\"Ye\"") != std::string::npos);
}

TEST_CASE("front rows are sorted by canonical objectives") {
  auto inst = make_oracle_tiny(3);
  GaConfig cfg;
  cfg.population_size = 16;
  cfg.max_generations = 8;
  cfg.seed = 7;
  auto result = run_nsga2(inst, cfg);
  result.front.sort_canonical();
  auto pts = result.front.points();
  for (std::size_t i = 1; i < pts.size(); ++i)
    CHECK(canonicalize(pts[i - 1].objectives) <= canonicalize(pts[i].objectives));
}

TEST_CASE("compare emits indicators and the merged front") {
  auto dir = temp_dir();
  auto instance = (dir / "cmp_inst.json").string();
  REQUIRE(run({"gen-instance", "--template", "oracle-tiny", "--seed", "3", "--out",
               instance.c_str()}) == kExitOk);
  auto out = (dir / "cmp_run").string();
  std::string message;
  REQUIRE(run({"compare", "--instance", instance.c_str(), "--pop", "20", "--gens", "15",
               "--grid", "3", "--seed", "11", "--out", out.c_str()},
              &message) == kExitOk);
  CHECK(message.find("coverage C(GA, WS)") != std::string::npos);
  CHECK(message.find("utopia point") != std::string::npos);
  CHECK(fs::exists(fs::path(out) / "compare.csv"));
  CHECK(fs::exists(fs::path(out) / "summary.json"));

  // Union hypervolume dominates both components'.
  auto summary = read_file(fs::path(out) / "summary.json");
  auto value_at = [&](const std::string& key) {
    auto pos = summary.find("\"" + key + "\"");
    REQUIRE(pos != std::string::npos);
    return std::stod(summary.substr(summary.find(':', pos) + 1));
  };
  CHECK(value_at("union") >= value_at("ga") - 1e-9);
  CHECK(value_at("union") >= value_at("wsum") - 1e-9);
  // The GA archive covers every supported point on this instance.
  CHECK(value_at("ga_over_wsum") == doctest::Approx(1.0));
}

TEST_CASE("tractability guard surfaces as exit code 3") {
  auto dir = temp_dir();
  NetworkInstance big = make_oracle_tiny(1);
  // Inflate every opening layer past the 2^20 configuration guard.
  auto clone_layer = [](auto& layer, const std::string& prefix) {
    auto base = layer[0];
    for (int i = static_cast<int>(layer.size()); i < 8; ++i) {
      auto copy = base;
      copy.id = prefix + std::to_string(i + 1);
      layer.push_back(copy);
    }
  };
  clone_layer(big.plants, "P");
  clone_layer(big.warehouses, "W");
  clone_layer(big.collection_centers, "L");
  big.plant_warehouse = uniform_arcs(8, 8, 1.0, 1.0);
  big.warehouse_customer = uniform_arcs(8, 2, 1.0, 1.0);
  big.customer_collection = uniform_arcs(2, 8, 1.0, 1.0);
  big.collection_plant = uniform_arcs(8, 8, 1.0, 1.0);
  big.collection_disposal = uniform_arcs(8, 1, 1.0, 1.0);
  auto path = (dir / "big.json").string();
  save_instance_file(big, path);
  REQUIRE(run({"validate", "--instance", path.c_str()}) == kExitOk);

  auto out = (dir / "big_run").string();
  CHECK(run({"solve", "--instance", path.c_str(), "--method", "wsum", "--grid", "1", "--out",
             out.c_str()}) == kExitIntractable);
}

TEST_CASE("cli binary runs end to end") {
  const char* cli = CLSC_CLI_PATH;
  auto dir = temp_dir();
  auto instance = (dir / "smoke.json").string();
  std::string cmd = std::string(cli) + " gen-instance --template oracle-tiny --seed 1 --out " +
                    instance + " > /dev/null 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  cmd = std::string(cli) + " validate --instance " + instance + " > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  cmd = std::string(cli) + " validate --instance /nonexistent.json > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == kExitIo);
}
