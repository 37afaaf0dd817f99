#include "clsc/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace clsc {

namespace {

using nlohmann::json;

json arc_table_to_json(const ArcTable& t) {
  json rows = json::array();
  for (std::size_t r = 0; r < t.cost.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < t.cost.cols(); ++c)
      row.push_back(json::array({t.cost(r, c), t.emission(r, c)}));
    rows.push_back(std::move(row));
  }
  return rows;
}

ArcTable arc_table_from_json(const json& rows, std::size_t expected_rows,
                             std::size_t expected_cols, const std::string& name) {
  if (!rows.is_array() || rows.size() != expected_rows)
    throw std::invalid_argument("arcs." + name + ": expected " + std::to_string(expected_rows) +
                                " rows");
  ArcTable t;
  t.cost = Mat(expected_rows, expected_cols);
  t.emission = Mat(expected_rows, expected_cols);
  for (std::size_t r = 0; r < expected_rows; ++r) {
    const json& row = rows.at(r);
    if (!row.is_array() || row.size() != expected_cols)
      throw std::invalid_argument("arcs." + name + " row " + std::to_string(r) + ": expected " +
                                  std::to_string(expected_cols) + " [cost, emission] pairs");
    for (std::size_t c = 0; c < expected_cols; ++c) {
      const json& pair = row.at(c);
      if (!pair.is_array() || pair.size() != 2)
        throw std::invalid_argument("arcs." + name + "[" + std::to_string(r) + "][" +
                                    std::to_string(c) + "]: expected a [cost, emission] pair");
      t.cost(r, c) = pair.at(0).get<double>();
      t.emission(r, c) = pair.at(1).get<double>();
    }
  }
  return t;
}

}  // namespace

NetworkInstance parse_instance(const std::string& json_text) {
  json doc = json::parse(json_text);
  NetworkInstance inst;

  for (const auto& p : doc.at("plants")) {
    Plant plant;
    plant.id = p.at("id").get<std::string>();
    plant.fixed_cost = p.at("fixed_cost").get<double>();
    plant.capacity = p.at("capacity").get<double>();
    plant.production_cost = p.at("production_cost").get<double>();
    plant.production_emission = p.at("production_emission").get<double>();
    plant.remanufacturing_cost = p.at("remanufacturing_cost").get<double>();
    plant.remanufacturing_emission = p.at("remanufacturing_emission").get<double>();
    inst.plants.push_back(std::move(plant));
  }
  for (const auto& w : doc.at("warehouses")) {
    Warehouse wh;
    wh.id = w.at("id").get<std::string>();
    wh.fixed_cost = w.at("fixed_cost").get<double>();
    wh.capacity = w.at("capacity").get<double>();
    wh.handling_cost = w.at("handling_cost").get<double>();
    wh.handling_emission = w.at("handling_emission").get<double>();
    wh.reliability = w.at("reliability").get<double>();
    inst.warehouses.push_back(std::move(wh));
  }
  for (const auto& c : doc.at("collection_centers")) {
    CollectionCenter cc;
    cc.id = c.at("id").get<std::string>();
    cc.fixed_cost = c.at("fixed_cost").get<double>();
    cc.capacity = c.at("capacity").get<double>();
    cc.disassembly_cost = c.at("disassembly_cost").get<double>();
    cc.disassembly_emission = c.at("disassembly_emission").get<double>();
    inst.collection_centers.push_back(std::move(cc));
  }
  for (const auto& d : doc.at("disposal_sites")) {
    DisposalSite ds;
    ds.id = d.at("id").get<std::string>();
    ds.capacity = d.at("capacity").get<double>();
    ds.disposal_cost = d.at("disposal_cost").get<double>();
    ds.disposal_emission = d.at("disposal_emission").get<double>();
    inst.disposal_sites.push_back(std::move(ds));
  }
  for (const auto& c : doc.at("customers")) inst.customers.push_back(c.get<std::string>());

  const json& arcs = doc.at("arcs");
  const std::size_t P = inst.num_plants(), W = inst.num_warehouses(), C = inst.num_customers(),
                    L = inst.num_collection(), M = inst.num_disposal();
  inst.plant_warehouse = arc_table_from_json(arcs.at("plant_warehouse"), P, W, "plant_warehouse");
  inst.warehouse_customer =
      arc_table_from_json(arcs.at("warehouse_customer"), W, C, "warehouse_customer");
  inst.customer_collection =
      arc_table_from_json(arcs.at("customer_collection"), C, L, "customer_collection");
  inst.collection_plant =
      arc_table_from_json(arcs.at("collection_plant"), L, P, "collection_plant");
  inst.collection_disposal =
      arc_table_from_json(arcs.at("collection_disposal"), L, M, "collection_disposal");

  for (const auto& s : doc.at("scenarios")) {
    DemandScenario sc;
    sc.probability = s.at("probability").get<double>();
    const json& demand = s.at("demand");
    sc.demand.resize(inst.customers.size(), 0.0);
    if (demand.size() != inst.customers.size())
      throw std::invalid_argument("scenario demand map does not cover exactly the customers");
    for (std::size_t k = 0; k < inst.customers.size(); ++k) {
      if (!demand.contains(inst.customers[k]))
        throw std::invalid_argument("scenario demand map is missing customer \"" +
                                    inst.customers[k] + "\"");
      sc.demand[k] = demand.at(inst.customers[k]).get<double>();
    }
    inst.scenarios.push_back(std::move(sc));
  }

  inst.alpha = doc.at("alpha").get<double>();
  inst.beta = doc.at("beta").get<double>();
  return inst;
}

std::string instance_to_json(const NetworkInstance& inst) {
  json doc;
  doc["alpha"] = inst.alpha;
  doc["beta"] = inst.beta;

  json plants = json::array();
  for (const auto& p : inst.plants)
    plants.push_back({{"id", p.id},
                      {"fixed_cost", p.fixed_cost},
                      {"capacity", p.capacity},
                      {"production_cost", p.production_cost},
                      {"production_emission", p.production_emission},
                      {"remanufacturing_cost", p.remanufacturing_cost},
                      {"remanufacturing_emission", p.remanufacturing_emission}});
  doc["plants"] = std::move(plants);

  json warehouses = json::array();
  for (const auto& w : inst.warehouses)
    warehouses.push_back({{"id", w.id},
                          {"fixed_cost", w.fixed_cost},
                          {"capacity", w.capacity},
                          {"handling_cost", w.handling_cost},
                          {"handling_emission", w.handling_emission},
                          {"reliability", w.reliability}});
  doc["warehouses"] = std::move(warehouses);

  json centers = json::array();
  for (const auto& c : inst.collection_centers)
    centers.push_back({{"id", c.id},
                       {"fixed_cost", c.fixed_cost},
                       {"capacity", c.capacity},
                       {"disassembly_cost", c.disassembly_cost},
                       {"disassembly_emission", c.disassembly_emission}});
  doc["collection_centers"] = std::move(centers);

  json sites = json::array();
  for (const auto& d : inst.disposal_sites)
    sites.push_back({{"id", d.id},
                     {"capacity", d.capacity},
                     {"disposal_cost", d.disposal_cost},
                     {"disposal_emission", d.disposal_emission}});
  doc["disposal_sites"] = std::move(sites);

  doc["customers"] = inst.customers;

  doc["arcs"] = {{"plant_warehouse", arc_table_to_json(inst.plant_warehouse)},
                 {"warehouse_customer", arc_table_to_json(inst.warehouse_customer)},
                 {"customer_collection", arc_table_to_json(inst.customer_collection)},
                 {"collection_plant", arc_table_to_json(inst.collection_plant)},
                 {"collection_disposal", arc_table_to_json(inst.collection_disposal)}};

  json scenarios = json::array();
  for (const auto& s : inst.scenarios) {
    json demand;
    for (std::size_t k = 0; k < inst.customers.size(); ++k)
      demand[inst.customers[k]] = s.demand[k];
    scenarios.push_back({{"probability", s.probability}, {"demand", std::move(demand)}});
  }
  doc["scenarios"] = std::move(scenarios);

  return doc.dump(2) + "\n";
}

NetworkInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open instance file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

void save_instance_file(const NetworkInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write instance file: " + path);
  out << instance_to_json(inst);
  if (!out) throw std::ios_base::failure("failed writing instance file: " + path);
}

namespace {

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

ArcTable random_arc_table(Rng& rng, std::size_t rows, std::size_t cols, double cost_lo,
                          double cost_hi, double em_lo, double em_hi) {
  ArcTable t;
  t.cost = Mat(rows, cols);
  t.emission = Mat(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      t.cost(r, c) = round3(rng.uniform(cost_lo, cost_hi));
      t.emission(r, c) = round3(rng.uniform(em_lo, em_hi));
    }
  return t;
}

ArcTable uniform_arc_table(std::size_t rows, std::size_t cols) {
  ArcTable t;
  t.cost = Mat(rows, cols, 1.0);
  t.emission = Mat(rows, cols, 1.0);
  return t;
}

}  // namespace

NetworkInstance make_tabletop(std::uint64_t seed) {
  Rng rng(seed);
  NetworkInstance inst;
  inst.alpha = 0.2;
  inst.beta = 0.1;

  // Documented coefficient ranges. Capacities are ample (any single facility
  // can carry the worst scenario), so routing choices are whole assignments
  // and the interesting trade-offs live in the opening decisions.
  const std::array<double, 2> plant_caps{3200.0, 3200.0};
  const std::array<double, 2> wh_caps{3200.0, 3100.0};
  const std::array<double, 2> coll_caps{700.0, 650.0};

  // Plant 1 is cheap but dirty, plant 2 expensive but clean; warehouse 1 is
  // reliable but costly, warehouse 2 the reverse; the collection centers
  // trade disassembly cost against emission. Ranges are documented in the
  // format reference.
  {
    Plant p;
    p.id = "P1";
    p.fixed_cost = round3(rng.uniform(800.0, 1100.0));
    p.capacity = plant_caps[0];
    p.production_cost = round3(rng.uniform(4.0, 6.0));
    p.production_emission = round3(rng.uniform(4.0, 6.0));
    p.remanufacturing_cost = round3(rng.uniform(2.0, 3.0));
    p.remanufacturing_emission = round3(rng.uniform(2.0, 3.0));
    inst.plants.push_back(std::move(p));
    p = Plant{};
    p.id = "P2";
    p.fixed_cost = round3(rng.uniform(1000.0, 1400.0));
    p.capacity = plant_caps[1];
    p.production_cost = round3(rng.uniform(7.0, 9.0));
    p.production_emission = round3(rng.uniform(2.0, 3.0));
    p.remanufacturing_cost = round3(rng.uniform(3.0, 4.5));
    p.remanufacturing_emission = round3(rng.uniform(1.0, 1.8));
    inst.plants.push_back(std::move(p));
  }
  {
    Warehouse w;
    w.id = "W1";
    w.fixed_cost = round3(rng.uniform(700.0, 900.0));
    w.capacity = wh_caps[0];
    w.handling_cost = round3(rng.uniform(2.0, 3.0));
    w.handling_emission = round3(rng.uniform(0.3, 0.6));
    w.reliability = round3(rng.uniform(0.9, 0.99));
    inst.warehouses.push_back(std::move(w));
    w = Warehouse{};
    w.id = "W2";
    w.fixed_cost = round3(rng.uniform(500.0, 700.0));
    w.capacity = wh_caps[1];
    w.handling_cost = round3(rng.uniform(1.0, 2.0));
    w.handling_emission = round3(rng.uniform(0.6, 1.0));
    w.reliability = round3(rng.uniform(0.75, 0.85));
    inst.warehouses.push_back(std::move(w));
  }
  {
    CollectionCenter c;
    c.id = "L1";
    c.fixed_cost = round3(rng.uniform(250.0, 400.0));
    c.capacity = coll_caps[0];
    c.disassembly_cost = round3(rng.uniform(1.0, 1.8));
    c.disassembly_emission = round3(rng.uniform(1.0, 1.5));
    inst.collection_centers.push_back(std::move(c));
    c = CollectionCenter{};
    c.id = "L2";
    c.fixed_cost = round3(rng.uniform(200.0, 350.0));
    c.capacity = coll_caps[1];
    c.disassembly_cost = round3(rng.uniform(1.8, 3.0));
    c.disassembly_emission = round3(rng.uniform(0.5, 1.0));
    inst.collection_centers.push_back(std::move(c));
  }
  {
    DisposalSite d;
    d.id = "M1";
    d.capacity = 400.0;
    d.disposal_cost = round3(rng.uniform(1.0, 2.0));
    d.disposal_emission = round3(rng.uniform(0.5, 2.0));
    inst.disposal_sites.push_back(std::move(d));
  }
  inst.customers = {"C1", "C2"};

  // Transport spreads stay below the facility-level cost gaps so the
  // designed trade-offs survive any seed.
  inst.plant_warehouse = random_arc_table(rng, 2, 2, 1.0, 1.8, 0.1, 0.4);
  inst.warehouse_customer = random_arc_table(rng, 2, 2, 1.0, 1.8, 0.1, 0.4);
  inst.customer_collection = random_arc_table(rng, 2, 2, 0.8, 1.5, 0.1, 0.4);
  inst.collection_plant = random_arc_table(rng, 2, 2, 0.8, 1.5, 0.1, 0.4);
  inst.collection_disposal = random_arc_table(rng, 2, 1, 0.8, 1.5, 0.1, 0.4);

  inst.scenarios = generate_scenarios({1630.0, 950.0}, 0.2, 3, seed);
  return inst;
}

NetworkInstance make_oracle_tiny(std::uint64_t /*seed*/) {
  // Fixed small-integer data. Uniform transport arcs make the objectives
  // separable by layer, and each layer's fixed costs exceed any routing
  // saving, so the Pareto front is exactly the eight single-facility
  // configurations. That keeps the front reachable by the greedy decoder
  // while the flow space stays small enough for exhaustive enumeration.
  NetworkInstance inst;
  inst.alpha = 0.5;
  inst.beta = 0.0;

  auto plant = [](const char* id, double prod_cost, double prod_em) {
    Plant p;
    p.id = id;
    p.fixed_cost = 14.0;
    p.capacity = 6.0;
    p.production_cost = prod_cost;
    p.production_emission = prod_em;
    p.remanufacturing_cost = 2.0;
    p.remanufacturing_emission = 1.0;
    return p;
  };
  inst.plants = {plant("P1", 4.0, 6.0), plant("P2", 6.0, 3.0)};

  auto warehouse = [](const char* id, double fixed, double handling, double handling_em,
                      double reliability) {
    Warehouse w;
    w.id = id;
    w.fixed_cost = fixed;
    w.capacity = 6.0;
    w.handling_cost = handling;
    w.handling_emission = handling_em;
    w.reliability = reliability;
    return w;
  };
  inst.warehouses = {warehouse("W1", 14.0, 3.0, 1.0, 1.0),
                     warehouse("W2", 11.0, 1.0, 2.0, 0.5)};

  auto center = [](const char* id, double fixed, double dis_cost, double dis_em) {
    CollectionCenter c;
    c.id = id;
    c.fixed_cost = fixed;
    c.capacity = 3.0;
    c.disassembly_cost = dis_cost;
    c.disassembly_emission = dis_em;
    return c;
  };
  inst.collection_centers = {center("L1", 5.0, 1.0, 2.0), center("L2", 4.0, 2.0, 1.0)};

  DisposalSite site;
  site.id = "M1";
  site.capacity = 5.0;
  site.disposal_cost = 1.0;
  site.disposal_emission = 1.0;
  inst.disposal_sites = {site};

  inst.customers = {"C1", "C2"};
  inst.plant_warehouse = uniform_arc_table(2, 2);
  inst.warehouse_customer = uniform_arc_table(2, 2);
  inst.customer_collection = uniform_arc_table(2, 2);
  inst.collection_plant = uniform_arc_table(2, 2);
  inst.collection_disposal = uniform_arc_table(2, 1);

  inst.scenarios = generate_scenarios({4.0, 2.0}, 0.0, 1, 0);
  return inst;
}

}  // namespace clsc
