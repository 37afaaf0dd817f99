#include "clsc/moga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

namespace clsc {

GenotypeLayout GenotypeLayout::of(const NetworkInstance& inst) {
  return {inst.num_plants(), inst.num_warehouses(), inst.num_customers(),
          inst.num_collection()};
}

namespace {

// Descending-value order over values[ids], ties by lower index.
std::vector<std::size_t> by_descending_key(const std::vector<double>& keys) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });
  return order;
}

// Opens facilities by threshold, then repairs: at least one open per layer,
// and total open capacity covering `requirement` (opening in descending key
// order). Throws when even the full layer cannot cover the requirement.
std::vector<std::uint8_t> open_layer(const std::vector<double>& keys,
                                     const std::vector<double>& capacities, double requirement,
                                     const std::string& layer_name) {
  const std::size_t n = keys.size();
  double layer_total = 0.0;
  for (double c : capacities) layer_total += c;
  if (layer_total + kFeasibilityTol < requirement)
    throw DecodeError(layer_name, "layer " + layer_name + " cannot cover the demand: capacity " +
                                      std::to_string(layer_total) + " < requirement " +
                                      std::to_string(requirement));

  std::vector<std::uint8_t> open(n, 0);
  double open_capacity = 0.0;
  bool any_open = false;
  for (std::size_t f = 0; f < n; ++f)
    if (keys[f] >= 0.5) {
      open[f] = 1;
      open_capacity += capacities[f];
      any_open = true;
    }
  auto order = by_descending_key(keys);
  if (!any_open) {
    std::size_t f = order.front();
    open[f] = 1;
    open_capacity += capacities[f];
  }
  for (std::size_t pos = 0; pos < n && open_capacity + kFeasibilityTol < requirement; ++pos) {
    std::size_t f = order[pos];
    if (open[f]) continue;
    open[f] = 1;
    open_capacity += capacities[f];
  }
  return open;
}

}  // namespace

Solution decode(const Genotype& genotype, const NetworkInstance& inst) {
  const GenotypeLayout lay = GenotypeLayout::of(inst);
  if (genotype.size() != lay.size())
    throw std::invalid_argument("decode: genotype length " + std::to_string(genotype.size()) +
                                " does not match instance layout " + std::to_string(lay.size()));
  const std::size_t P = lay.P, W = lay.W, C = lay.C, L = lay.L, M = inst.num_disposal();
  const double max_demand = inst.max_scenario_demand();

  std::vector<double> plant_caps(P), wh_caps(W), coll_caps(L);
  for (std::size_t i = 0; i < P; ++i) plant_caps[i] = inst.plants[i].capacity;
  for (std::size_t j = 0; j < W; ++j) wh_caps[j] = inst.warehouses[j].capacity;
  for (std::size_t l = 0; l < L; ++l) coll_caps[l] = inst.collection_centers[l].capacity;

  double disposal_total = 0.0;
  for (const auto& d : inst.disposal_sites) disposal_total += d.capacity;
  if (disposal_total + kFeasibilityTol < inst.beta * inst.alpha * max_demand)
    throw DecodeError("disposal_sites", "disposal capacity cannot absorb the worst scenario");

  Solution sol;
  {
    std::vector<double> keys(P);
    for (std::size_t i = 0; i < P; ++i) keys[i] = genotype[lay.plant_key(i)];
    sol.open_plants = open_layer(keys, plant_caps, max_demand, "plants");
  }
  {
    std::vector<double> keys(W);
    for (std::size_t j = 0; j < W; ++j) keys[j] = genotype[lay.warehouse_key(j)];
    sol.open_warehouses = open_layer(keys, wh_caps, max_demand, "warehouses");
  }
  {
    std::vector<double> keys(L);
    for (std::size_t l = 0; l < L; ++l) keys[l] = genotype[lay.collection_key(l)];
    sol.open_collection =
        open_layer(keys, coll_caps, inst.alpha * max_demand, "collection_centers");
  }

  sol.flows.reserve(inst.scenarios.size());
  for (const auto& scenario : inst.scenarios) {
    ScenarioFlows f;
    f.ya = Mat(P, W);
    f.yb = Mat(W, C);
    f.yc = Mat(C, L);
    f.yd = Mat(L, M);
    f.ye = Mat(L, P);

    // Forward: fill each customer's demand from open warehouses in
    // descending warehouse->customer key order under residual capacity.
    std::vector<double> wh_residual(W, 0.0);
    for (std::size_t j = 0; j < W; ++j)
      if (sol.open_warehouses[j]) wh_residual[j] = wh_caps[j];
    for (std::size_t k = 0; k < C; ++k) {
      std::vector<double> keys(W, -1.0);
      for (std::size_t j = 0; j < W; ++j)
        if (sol.open_warehouses[j]) keys[j] = genotype[lay.wc_key(j, k)];
      double remaining = scenario.demand[k];
      for (std::size_t j : by_descending_key(keys)) {
        if (remaining <= 0.0) break;
        if (!sol.open_warehouses[j]) continue;
        double amount = std::min(remaining, wh_residual[j]);
        if (amount <= 0.0) continue;
        f.yb(j, k) += amount;
        wh_residual[j] -= amount;
        remaining -= amount;
      }
    }

    // Warehouse inflow from open plants by descending plant->warehouse keys.
    std::vector<double> plant_residual(P, 0.0);
    for (std::size_t i = 0; i < P; ++i)
      if (sol.open_plants[i]) plant_residual[i] = plant_caps[i];
    for (std::size_t j = 0; j < W; ++j) {
      double remaining = f.yb.row_sum(j);
      std::vector<double> keys(P, -1.0);
      for (std::size_t i = 0; i < P; ++i)
        if (sol.open_plants[i]) keys[i] = genotype[lay.pw_key(i, j)];
      for (std::size_t i : by_descending_key(keys)) {
        if (remaining <= 0.0) break;
        if (!sol.open_plants[i]) continue;
        double amount = std::min(remaining, plant_residual[i]);
        if (amount <= 0.0) continue;
        f.ya(i, j) += amount;
        plant_residual[i] -= amount;
        remaining -= amount;
      }
    }

    // Returns: alpha of each customer's delivery to open collection centers
    // by descending customer->collection keys.
    std::vector<double> coll_residual(L, 0.0);
    for (std::size_t l = 0; l < L; ++l)
      if (sol.open_collection[l]) coll_residual[l] = coll_caps[l];
    for (std::size_t k = 0; k < C; ++k) {
      double remaining = inst.alpha * f.yb.col_sum(k);
      std::vector<double> keys(L, -1.0);
      for (std::size_t l = 0; l < L; ++l)
        if (sol.open_collection[l]) keys[l] = genotype[lay.cc_key(k, l)];
      for (std::size_t l : by_descending_key(keys)) {
        if (remaining <= 0.0) break;
        if (!sol.open_collection[l]) continue;
        double amount = std::min(remaining, coll_residual[l]);
        if (amount <= 0.0) continue;
        f.yc(k, l) += amount;
        coll_residual[l] -= amount;
        remaining -= amount;
      }
    }

    // Split collected units: beta to disposal (cheapest site first, by
    // transport plus disposal unit cost), the rest to the open plant with the
    // highest collection->plant key.
    std::vector<double> disposal_residual(M);
    for (std::size_t m = 0; m < M; ++m) disposal_residual[m] = inst.disposal_sites[m].capacity;
    for (std::size_t l = 0; l < L; ++l) {
      double collected = f.yc.col_sum(l);
      if (collected <= 0.0) continue;
      double to_dispose = inst.beta * collected;
      double to_remanufacture = collected - to_dispose;

      if (to_dispose > 0.0) {
        std::vector<std::size_t> site_order(M);
        std::iota(site_order.begin(), site_order.end(), std::size_t{0});
        std::stable_sort(site_order.begin(), site_order.end(), [&](std::size_t a, std::size_t b) {
          double ca = inst.collection_disposal.cost(l, a) + inst.disposal_sites[a].disposal_cost;
          double cb = inst.collection_disposal.cost(l, b) + inst.disposal_sites[b].disposal_cost;
          return ca < cb;
        });
        double remaining = to_dispose;
        for (std::size_t m : site_order) {
          if (remaining <= 0.0) break;
          double amount = std::min(remaining, disposal_residual[m]);
          if (amount <= 0.0) continue;
          f.yd(l, m) += amount;
          disposal_residual[m] -= amount;
          remaining -= amount;
        }
      }
      if (to_remanufacture > 0.0) {
        std::vector<double> keys(P, -1.0);
        for (std::size_t i = 0; i < P; ++i)
          if (sol.open_plants[i]) keys[i] = genotype[lay.cp_key(l, i)];
        f.ye(l, by_descending_key(keys).front()) += to_remanufacture;
      }
    }

    sol.flows.push_back(std::move(f));
  }
  return sol;
}

std::vector<Genotype> init_population(const NetworkInstance& inst, const GaConfig& cfg) {
  const GenotypeLayout lay = GenotypeLayout::of(inst);
  Rng rng(cfg.seed);
  std::vector<Genotype> population;
  population.reserve(cfg.population_size);
  for (std::size_t p = 0; p < cfg.population_size; ++p) {
    Genotype g(lay.size());
    for (double& gene : g) gene = rng.uniform();
    auto repair_layer = [&](std::size_t offset, std::size_t count) {
      std::size_t best = offset;
      for (std::size_t f = 0; f < count; ++f) {
        if (g[offset + f] >= 0.5) return;
        if (g[offset + f] > g[best]) best = offset + f;
      }
      g[best] = 0.5 + 0.5 * g[best];
    };
    repair_layer(lay.plant_key(0), lay.P);
    repair_layer(lay.warehouse_key(0), lay.W);
    repair_layer(lay.collection_key(0), lay.L);
    population.push_back(std::move(g));
  }
  return population;
}

std::pair<double, double> sbx_gene(double p1, double p2, double u, double eta) {
  double spread = (u <= 0.5) ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                             : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
  double c1 = 0.5 * ((1.0 + spread) * p1 + (1.0 - spread) * p2);
  double c2 = 0.5 * ((1.0 - spread) * p1 + (1.0 + spread) * p2);
  return {c1, c2};
}

std::pair<Genotype, Genotype> sbx_crossover(const Genotype& p1, const Genotype& p2,
                                            double crossover_rate, double eta, Rng& rng) {
  if (p1.size() != p2.size())
    throw std::invalid_argument("sbx_crossover: parent lengths differ");
  Genotype c1(p1.size()), c2(p2.size());
  for (std::size_t g = 0; g < p1.size(); ++g) {
    if (rng.uniform() < crossover_rate) {
      auto [a, b] = sbx_gene(p1[g], p2[g], rng.uniform(), eta);
      c1[g] = std::clamp(a, 0.0, 1.0);
      c2[g] = std::clamp(b, 0.0, 1.0);
    } else {
      c1[g] = p1[g];
      c2[g] = p2[g];
    }
  }
  return {std::move(c1), std::move(c2)};
}

double polynomial_mutation_gene(double y, double u, double eta) {
  double delta;
  if (u <= 0.5) {
    double xy = 1.0 - y;
    double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta + 1.0);
    delta = std::pow(val, 1.0 / (eta + 1.0)) - 1.0;
  } else {
    double xy = y;
    double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta + 1.0);
    delta = 1.0 - std::pow(val, 1.0 / (eta + 1.0));
  }
  return std::clamp(y + delta, 0.0, 1.0);
}

Genotype polynomial_mutation(const Genotype& g, double mutation_rate, double eta, Rng& rng) {
  Genotype out = g;
  for (double& gene : out)
    if (rng.uniform() < mutation_rate) gene = polynomial_mutation_gene(gene, rng.uniform(), eta);
  return out;
}

bool crowded_comparison_wins(int rank_a, double crowd_a, int rank_b, double crowd_b, Rng& rng) {
  if (rank_a != rank_b) return rank_a < rank_b;
  if (crowd_a != crowd_b) return crowd_a > crowd_b;
  return rng.uniform() < 0.5;
}

std::size_t select_parent(const std::vector<int>& rank, const std::vector<double>& crowding,
                          std::size_t tournament_size, Rng& rng) {
  std::size_t best = rng.uniform_index(rank.size());
  for (std::size_t t = 1; t < tournament_size; ++t) {
    std::size_t challenger = rng.uniform_index(rank.size());
    if (crowded_comparison_wins(rank[challenger], crowding[challenger], rank[best],
                                crowding[best], rng))
      best = challenger;
  }
  return best;
}

bool Archive::add(ArchiveEntry entry) {
  auto c = canonicalize(entry.objectives);
  for (const auto& existing : entries_) {
    auto ce = canonicalize(existing.objectives);
    if (ce == c) return false;  // duplicate objectives: keep the earliest
    if (dominates_min(ce, c)) return false;
  }
  std::erase_if(entries_, [&](const ArchiveEntry& existing) {
    return dominates_min(c, canonicalize(existing.objectives));
  });
  entries_.push_back(std::move(entry));
  if (capacity_ > 0 && entries_.size() > capacity_) truncate();
  return true;
}

void Archive::truncate() {
  while (entries_.size() > capacity_) {
    auto crowd = crowding_distance(objectives());
    std::size_t victim = 0;
    for (std::size_t i = 1; i < entries_.size(); ++i)
      if (crowd[i] <= crowd[victim]) victim = i;  // ties: drop the latest
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(victim));
  }
}

std::vector<ObjectiveVector> Archive::objectives() const {
  std::vector<ObjectiveVector> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.objectives);
  return out;
}

namespace {

struct EvaluatedPopulation {
  std::vector<Genotype> genotypes;
  std::vector<Solution> solutions;
  std::vector<ObjectiveVector> objectives;

  std::size_t size() const { return genotypes.size(); }
};

EvaluatedPopulation evaluate_population(const NetworkInstance& inst,
                                        std::vector<Genotype> genotypes, std::size_t threads) {
  EvaluatedPopulation pop;
  pop.genotypes = std::move(genotypes);
  pop.solutions.resize(pop.genotypes.size());
  pop.objectives.resize(pop.genotypes.size());
  std::exception_ptr error;
  std::mutex error_mutex;
  parallel_for(pop.genotypes.size(), threads, [&](std::size_t i) {
    try {
      pop.solutions[i] = decode(pop.genotypes[i], inst);
      pop.objectives[i] = evaluate(inst, pop.solutions[i]);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  });
  if (error) std::rethrow_exception(error);
  return pop;
}

// Crowding distances computed front-by-front over the whole population.
std::vector<double> population_crowding(const std::vector<ObjectiveVector>& objectives,
                                        const NondominatedSort& sorted) {
  std::vector<double> crowd(objectives.size(), 0.0);
  for (const auto& front : sorted.fronts) {
    std::vector<ObjectiveVector> sub;
    sub.reserve(front.size());
    for (std::size_t idx : front) sub.push_back(objectives[idx]);
    auto d = crowding_distance(sub);
    for (std::size_t i = 0; i < front.size(); ++i) crowd[front[i]] = d[i];
  }
  return crowd;
}

// mu+lambda survival: fill by rank, split the boundary front by descending
// crowding (stable on insertion order).
std::vector<std::size_t> survive(const std::vector<ObjectiveVector>& objectives,
                                 std::size_t target) {
  auto sorted = fast_nondominated_sort(objectives);
  std::vector<std::size_t> keep;
  keep.reserve(target);
  for (const auto& front : sorted.fronts) {
    if (keep.size() + front.size() <= target) {
      keep.insert(keep.end(), front.begin(), front.end());
      continue;
    }
    std::vector<ObjectiveVector> sub;
    sub.reserve(front.size());
    for (std::size_t idx : front) sub.push_back(objectives[idx]);
    auto d = crowding_distance(sub);
    std::vector<std::size_t> order(front.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
    for (std::size_t pos = 0; pos < order.size() && keep.size() < target; ++pos)
      keep.push_back(front[order[pos]]);
    break;
  }
  return keep;
}

GenerationStats make_stats(std::size_t generation, const Archive& archive, double hv,
                           const std::vector<ObjectiveVector>& population_objectives) {
  GenerationStats st;
  st.generation = generation;
  st.archive_size = archive.entries().size();
  st.hypervolume = hv;
  st.best_cost = std::numeric_limits<double>::infinity();
  st.best_co2 = std::numeric_limits<double>::infinity();
  st.best_dispatch = -std::numeric_limits<double>::infinity();
  for (const auto& e : archive.entries()) {
    st.best_cost = std::min(st.best_cost, e.objectives.total_cost);
    st.best_co2 = std::min(st.best_co2, e.objectives.total_co2);
    st.best_dispatch = std::max(st.best_dispatch, e.objectives.expected_dispatch);
  }
  double n = static_cast<double>(population_objectives.size());
  for (const auto& o : population_objectives) {
    st.mean_cost += o.total_cost / n;
    st.mean_co2 += o.total_co2 / n;
    st.mean_dispatch += o.expected_dispatch / n;
  }
  return st;
}

}  // namespace

GaResult run_nsga2(const NetworkInstance& inst, const GaConfig& cfg,
                   const std::function<void(std::size_t, const Archive&)>& per_generation) {
  if (cfg.population_size < 4 || cfg.population_size % 2 != 0)
    throw std::invalid_argument("run_nsga2: population_size must be even and >= 4");
  if (cfg.crossover_rate < 0.0 || cfg.crossover_rate > 1.0)
    throw std::invalid_argument("run_nsga2: crossover_rate outside [0, 1]");
  if (cfg.tournament_size < 2)
    throw std::invalid_argument("run_nsga2: tournament_size must be >= 2");

  const GenotypeLayout lay = GenotypeLayout::of(inst);
  const double mutation_rate =
      cfg.mutation_rate >= 0.0 ? cfg.mutation_rate : 1.0 / static_cast<double>(lay.size());
  if (mutation_rate > 1.0) throw std::invalid_argument("run_nsga2: mutation_rate outside [0, 1]");

  Rng rng(cfg.seed);
  Archive archive(cfg.archive_capacity);
  GaResult result;

  EvaluatedPopulation pop =
      evaluate_population(inst, init_population(inst, cfg), cfg.threads);

  // Frozen hypervolume reference: the coordinate-wise worst canonical
  // objectives of the first generation, pushed 10% further out.
  std::array<double, 3> reference{};
  {
    std::array<double, 3> worst{-std::numeric_limits<double>::infinity(),
                                -std::numeric_limits<double>::infinity(),
                                -std::numeric_limits<double>::infinity()};
    for (const auto& o : pop.objectives) {
      auto c = canonicalize(o);
      for (int d = 0; d < 3; ++d) worst[d] = std::max(worst[d], c[d]);
    }
    for (int d = 0; d < 3; ++d) reference[d] = worst[d] + 0.1 * std::max(std::abs(worst[d]), 1e-9);
  }

  for (std::size_t i = 0; i < pop.size(); ++i)
    archive.add({pop.genotypes[i], pop.solutions[i], pop.objectives[i], 0});

  double hv = hypervolume_clipped(archive.objectives(), reference);
  result.stats.push_back(make_stats(0, archive, hv, pop.objectives));
  if (per_generation) per_generation(0, archive);

  std::size_t stall_count = 0;
  double prev_hv = hv;
  std::size_t generation = 0;

  while (generation < cfg.max_generations) {
    ++generation;

    auto sorted = fast_nondominated_sort(pop.objectives);
    auto crowd = population_crowding(pop.objectives, sorted);

    // All stochastic decisions for this generation, drawn sequentially.
    std::vector<Genotype> children;
    children.reserve(cfg.population_size);
    while (children.size() < cfg.population_size) {
      std::size_t a = select_parent(sorted.rank, crowd, cfg.tournament_size, rng);
      std::size_t b = select_parent(sorted.rank, crowd, cfg.tournament_size, rng);
      auto [c1, c2] = sbx_crossover(pop.genotypes[a], pop.genotypes[b], cfg.crossover_rate,
                                    cfg.sbx_eta, rng);
      children.push_back(polynomial_mutation(c1, mutation_rate, cfg.mutation_eta, rng));
      children.push_back(polynomial_mutation(c2, mutation_rate, cfg.mutation_eta, rng));
    }

    EvaluatedPopulation offspring =
        evaluate_population(inst, std::move(children), cfg.threads);
    for (std::size_t i = 0; i < offspring.size(); ++i)
      archive.add({offspring.genotypes[i], offspring.solutions[i], offspring.objectives[i],
                   generation});

    // Merge and survive.
    EvaluatedPopulation merged;
    merged.genotypes.reserve(pop.size() + offspring.size());
    merged.solutions.reserve(pop.size() + offspring.size());
    merged.objectives.reserve(pop.size() + offspring.size());
    auto absorb = [&](EvaluatedPopulation& src) {
      for (std::size_t i = 0; i < src.size(); ++i) {
        merged.genotypes.push_back(std::move(src.genotypes[i]));
        merged.solutions.push_back(std::move(src.solutions[i]));
        merged.objectives.push_back(src.objectives[i]);
      }
    };
    absorb(pop);
    absorb(offspring);

    auto keep = survive(merged.objectives, cfg.population_size);
    EvaluatedPopulation next;
    next.genotypes.reserve(keep.size());
    next.solutions.reserve(keep.size());
    next.objectives.reserve(keep.size());
    for (std::size_t idx : keep) {
      next.genotypes.push_back(std::move(merged.genotypes[idx]));
      next.solutions.push_back(std::move(merged.solutions[idx]));
      next.objectives.push_back(merged.objectives[idx]);
    }
    pop = std::move(next);

    hv = hypervolume_clipped(archive.objectives(), reference);
    result.stats.push_back(make_stats(generation, archive, hv, pop.objectives));
    if (per_generation) per_generation(generation, archive);

    double improvement = (hv - prev_hv) / std::max(std::abs(prev_hv), 1e-12);
    if (improvement < cfg.stall_tolerance) {
      if (++stall_count >= cfg.stall_generations) {
        result.stalled = true;
        break;
      }
    } else {
      stall_count = 0;
    }
    prev_hv = hv;
  }

  result.generations_run = generation;
  for (const auto& e : archive.entries()) {
    Provenance prov;
    prov.method = "ga";
    prov.generation = static_cast<long>(e.generation_found);
    result.front.add({e.objectives, e.solution, {prov}});
  }
  result.front.sort_canonical();
  return result;
}

}  // namespace clsc
