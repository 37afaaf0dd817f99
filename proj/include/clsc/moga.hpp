#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "clsc/model.hpp"
#include "clsc/pareto.hpp"

namespace clsc {

/// Real vector in [0,1]^n: one opening key per plant, warehouse, and
/// collection center, then one priority key per arc of the plant->warehouse,
/// warehouse->customer, customer->collection, and collection->plant families.
/// Priority keys are shared across scenarios.
using Genotype = std::vector<double>;

/// Gene offsets for one instance's genotype layout.
struct GenotypeLayout {
  std::size_t P = 0, W = 0, C = 0, L = 0;

  static GenotypeLayout of(const NetworkInstance& inst);

  std::size_t size() const { return P + W + L + P * W + W * C + C * L + L * P; }
  std::size_t plant_key(std::size_t i) const { return i; }
  std::size_t warehouse_key(std::size_t j) const { return P + j; }
  std::size_t collection_key(std::size_t l) const { return P + W + l; }
  std::size_t pw_key(std::size_t i, std::size_t j) const { return P + W + L + i * W + j; }
  std::size_t wc_key(std::size_t j, std::size_t k) const {
    return P + W + L + P * W + j * C + k;
  }
  std::size_t cc_key(std::size_t k, std::size_t l) const {
    return P + W + L + P * W + W * C + k * L + l;
  }
  std::size_t cp_key(std::size_t l, std::size_t i) const {
    return P + W + L + P * W + W * C + C * L + l * P + i;
  }
};

struct GaConfig {
  std::size_t population_size = 100;  // even, >= 4
  std::size_t max_generations = 200;
  double crossover_rate = 0.9;   // per-gene SBX probability
  double mutation_rate = -1.0;   // per-gene; negative means 1/genome_length
  double sbx_eta = 15.0;
  double mutation_eta = 20.0;
  std::size_t tournament_size = 2;
  std::size_t stall_generations = 25;
  double stall_tolerance = 1e-4;  // relative archive-hypervolume improvement
  std::uint64_t seed = 42;
  std::size_t archive_capacity = 4096;
  std::size_t threads = 1;
};

class DecodeError : public std::runtime_error {
 public:
  DecodeError(const std::string& layer, const std::string& what)
      : std::runtime_error(what), layer_(layer) {}
  const std::string& layer() const { return layer_; }

 private:
  std::string layer_;
};

/// Turns a genotype into a feasible Solution: threshold facility keys at 0.5
/// with capacity repair, then greedy priority-key flow assignment per
/// scenario. Throws DecodeError when a layer's total capacity cannot cover
/// the worst scenario even with every facility open.
Solution decode(const Genotype& genotype, const NetworkInstance& inst);

/// population_size uniform genotypes from the seeded stream, repaired so each
/// facility layer has at least one key at or above 0.5.
std::vector<Genotype> init_population(const NetworkInstance& inst, const GaConfig& cfg);

/// SBX spread applied to one gene pair for a given u ~ U(0,1). Returns the
/// pre-clamp children; c1 + c2 == p1 + p2 up to rounding.
std::pair<double, double> sbx_gene(double p1, double p2, double u, double eta);

/// Per gene: with probability crossover_rate apply sbx_gene, else copy.
/// Results clamped to [0,1].
std::pair<Genotype, Genotype> sbx_crossover(const Genotype& p1, const Genotype& p2,
                                            double crossover_rate, double eta, Rng& rng);

/// Polynomial mutation of one gene over bounds [0,1] for a given u ~ U(0,1).
double polynomial_mutation_gene(double y, double u, double eta);

/// Per gene: with probability mutation_rate apply polynomial_mutation_gene.
Genotype polynomial_mutation(const Genotype& g, double mutation_rate, double eta, Rng& rng);

/// True when (rank_a, crowd_a) beats (rank_b, crowd_b): lower rank wins, ties
/// by larger crowding distance, exact ties decided by the stream.
bool crowded_comparison_wins(int rank_a, double crowd_a, int rank_b, double crowd_b, Rng& rng);

/// Tournament selection under the crowded-comparison order.
std::size_t select_parent(const std::vector<int>& rank, const std::vector<double>& crowding,
                          std::size_t tournament_size, Rng& rng);

struct ArchiveEntry {
  Genotype genotype;
  Solution solution;
  ObjectiveVector objectives;
  std::size_t generation_found = 0;
};

/// Elitist archive: mutually non-dominated at all times, duplicates (by exact
/// objective equality) collapsed keeping the earliest, bounded by capacity
/// with crowding-distance truncation.
class Archive {
 public:
  explicit Archive(std::size_t capacity) : capacity_(capacity) {}

  bool add(ArchiveEntry entry);
  const std::vector<ArchiveEntry>& entries() const { return entries_; }
  std::vector<ObjectiveVector> objectives() const;

 private:
  void truncate();

  std::size_t capacity_;
  std::vector<ArchiveEntry> entries_;
};

struct GenerationStats {
  std::size_t generation = 0;
  std::size_t archive_size = 0;
  double hypervolume = 0.0;
  double best_cost = 0.0;
  double best_co2 = 0.0;
  double best_dispatch = 0.0;
  double mean_cost = 0.0;
  double mean_co2 = 0.0;
  double mean_dispatch = 0.0;
};

struct GaResult {
  ParetoFront front;
  std::vector<GenerationStats> stats;
  std::size_t generations_run = 0;
  bool stalled = false;
};

/// NSGA-II generational loop (mu+lambda, crowded-comparison survival) with a
/// global archive. Terminates at max_generations or when the archive
/// hypervolume improves by less than stall_tolerance (relative) for
/// stall_generations consecutive generations. All random draws for a
/// generation happen sequentially before any parallel evaluation, so results
/// do not depend on cfg.threads.
GaResult run_nsga2(
    const NetworkInstance& inst, const GaConfig& cfg,
    const std::function<void(std::size_t, const Archive&)>& per_generation = {});

}  // namespace clsc
