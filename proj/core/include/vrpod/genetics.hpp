#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "vrpod/instance.hpp"
#include "vrpod/random.hpp"

namespace vrpod {

/// Random-key vector plus its cached fitness (+inf when undecoded or infeasible).
/// Genes are not modified after decoding; edits produce a new chromosome.
struct Chromosome {
  std::vector<double> genes;
  double fitness = kInfinity;
  friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

/// Maps genes to a fitness value. Must be pure and thread-safe.
using FitnessFn = std::function<double(std::span<const double>)>;

/// Members kept sorted by non-decreasing fitness.
struct Population {
  std::vector<Chromosome> members;

  std::size_t size() const noexcept { return members.size(); }
  const Chromosome& best() const { return members.front(); }
  void sort();
};

enum class BiasFunction { Constant, Logarithmic, Linear, Polynomial, Exponential };

std::string_view to_string(BiasFunction phi);
BiasFunction bias_function_from_string(std::string_view text);

/// Weight of the parent ranked `rank` (1-based).
double bias_weight(BiasFunction phi, std::size_t rank);

struct MutantSchedule {
  double initial_fraction = 0.1;  // pct0_vm
  double increment = 0.1;         // pct_mi
  int level = 0;                  // i in {0,1,2,3}
};

/// pct0_vm + min(i * pct_mi, 0.6 - pct0_vm).
double mutant_fraction(const MutantSchedule& schedule);

/// Population of ceil(alpha * n) members.
std::size_t population_size(double alpha, std::size_t chromosome_length);

/// Sub-population sizes for one generation. Elite and mutant counts round up;
/// crossover takes the remainder.
struct GenerationLayout {
  std::size_t elite = 0;
  std::size_t mutants = 0;
  std::size_t offspring = 0;
};

GenerationLayout generation_layout(std::size_t population, double elite_fraction, double mutant_fraction);

struct EvolutionParams {
  double elite_fraction = 0.16;  // pct_e
  std::size_t total_parents = 4;  // pi_t
  std::size_t elite_parents = 2;  // pi_e
  BiasFunction bias = BiasFunction::Polynomial;
  int infeasible_retries = 10;
  unsigned workers = 1;
};

/// Fills a fresh chromosome with i.i.d. uniform [0,1) genes.
Chromosome random_chromosome(std::size_t n, Rng& rng);

/// p random chromosomes (undecoded).
Population init_population(std::size_t n, std::size_t p, Rng& rng);

/// Decodes every member whose fitness is still unset and sorts the population.
/// Infeasible members are replaced by fresh random chromosomes up to `retries`
/// times each. Returns the number of decode calls.
std::size_t decode_population(Population& population, const FitnessFn& fitness, Rng& rng, int retries,
                              unsigned workers);

/// Multi-parent biased crossover. `parents` are ranked best first; gene g of
/// the offspring is copied from parent r with probability weight(r) / sum of weights.
std::vector<double> multi_parent_crossover(std::span<const Chromosome* const> parents, BiasFunction phi,
                                           Rng& rng);

/// Builds and decodes the next generation: elite copies, fresh mutants and
/// crossover offspring (pi_e parents from the elite, pi_t - pi_e from the rest).
Population evolve_generation(const Population& current, const EvolutionParams& params, double mutant_frac,
                             const FitnessFn& fitness, Rng& rng, std::size_t* decode_count = nullptr);

}  // namespace vrpod
