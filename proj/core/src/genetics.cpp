#include "vrpod/genetics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

#include "vrpod/parallel.hpp"

namespace vrpod {

unsigned worker_count_from_env() {
  if (const char* env = std::getenv("VRPOD_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return 1;
}

void Population::sort() {
  std::stable_sort(members.begin(), members.end(),
                   [](const Chromosome& a, const Chromosome& b) { return a.fitness < b.fitness; });
}

std::string_view to_string(BiasFunction phi) {
  switch (phi) {
    case BiasFunction::Constant: return "constant";
    case BiasFunction::Logarithmic: return "logarithmic";
    case BiasFunction::Linear: return "linear";
    case BiasFunction::Polynomial: return "polynomial";
    case BiasFunction::Exponential: return "exponential";
  }
  return "polynomial";
}

BiasFunction bias_function_from_string(std::string_view text) {
  if (text == "constant") return BiasFunction::Constant;
  if (text == "logarithmic" || text == "log") return BiasFunction::Logarithmic;
  if (text == "linear" || text == "1/r") return BiasFunction::Linear;
  if (text == "polynomial" || text == "quadratic" || text == "1/r^2" || text == "1/r2") return BiasFunction::Polynomial;
  if (text == "exponential" || text == "exp") return BiasFunction::Exponential;
  throw std::invalid_argument("unknown bias function '" + std::string(text) + "'");
}

double bias_weight(BiasFunction phi, std::size_t rank) {
  const double r = static_cast<double>(rank);
  switch (phi) {
    case BiasFunction::Constant: return 1.0;
    case BiasFunction::Logarithmic: return 1.0 / std::log(r + 1.0);
    case BiasFunction::Linear: return 1.0 / r;
    case BiasFunction::Polynomial: return 1.0 / (r * r);
    case BiasFunction::Exponential: return std::exp(-r);
  }
  return 1.0;
}

double mutant_fraction(const MutantSchedule& s) {
  return s.initial_fraction + std::min(s.level * s.increment, 0.6 - s.initial_fraction);
}

std::size_t population_size(double alpha, std::size_t chromosome_length) {
  return static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(chromosome_length) - 1e-9));
}

GenerationLayout generation_layout(std::size_t population, double elite_fraction, double mutant_frac) {
  // The epsilon keeps products such as 100 * 0.16 from rounding up to 17.
  const auto count = [&](double frac) {
    return static_cast<std::size_t>(std::max(0.0, std::ceil(static_cast<double>(population) * frac - 1e-9)));
  };
  GenerationLayout layout;
  layout.elite = count(elite_fraction);
  layout.mutants = count(mutant_frac);
  if (layout.elite + layout.mutants > population) {
    throw std::invalid_argument("elite (" + std::to_string(layout.elite) + ") + mutants (" +
                                std::to_string(layout.mutants) + ") exceed population size " +
                                std::to_string(population));
  }
  layout.offspring = population - layout.elite - layout.mutants;
  return layout;
}

Chromosome random_chromosome(std::size_t n, Rng& rng) {
  Chromosome c;
  c.genes.resize(n);
  for (auto& g : c.genes) g = rng.uniform();
  return c;
}

Population init_population(std::size_t n, std::size_t p, Rng& rng) {
  Population pop;
  pop.members.reserve(p);
  for (std::size_t i = 0; i < p; ++i) pop.members.push_back(random_chromosome(n, rng));
  return pop;
}

std::size_t decode_population(Population& population, const FitnessFn& fitness, Rng& rng, int retries,
                              unsigned workers) {
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < population.members.size(); ++i) {
    if (std::isinf(population.members[i].fitness)) pending.push_back(i);
  }
  parallel_for(pending.size(), workers, [&](std::size_t k) {
    auto& member = population.members[pending[k]];
    member.fitness = fitness(member.genes);
  });
  std::size_t decodes = pending.size();

  // Replacements draw from the shared stream, so they run sequentially in
  // index order to stay independent of the worker count.
  for (const std::size_t i : pending) {
    auto& member = population.members[i];
    for (int attempt = 0; attempt < retries && std::isinf(member.fitness); ++attempt) {
      member = random_chromosome(member.genes.size(), rng);
      member.fitness = fitness(member.genes);
      ++decodes;
    }
  }
  population.sort();
  return decodes;
}

std::vector<double> multi_parent_crossover(std::span<const Chromosome* const> parents, BiasFunction phi,
                                           Rng& rng) {
  if (parents.size() < 2) throw std::invalid_argument("crossover needs at least two parents");
  const std::size_t n = parents.front()->genes.size();
  std::vector<double> cumulative(parents.size());
  double total = 0.0;
  for (std::size_t r = 0; r < parents.size(); ++r) {
    if (parents[r]->genes.size() != n) throw std::invalid_argument("parents differ in length");
    total += bias_weight(phi, r + 1);
    cumulative[r] = total;
  }
  std::vector<double> child(n);
  for (std::size_t g = 0; g < n; ++g) {
    const double u = rng.uniform() * total;
    std::size_t r = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                             cumulative.begin());
    r = std::min(r, parents.size() - 1);
    child[g] = parents[r]->genes[g];
  }
  return child;
}

namespace {

/// k distinct indices drawn uniformly from [lo, hi) (partial Fisher-Yates).
std::vector<std::size_t> sample_without_replacement(std::size_t lo, std::size_t hi, std::size_t k, Rng& rng) {
  std::vector<std::size_t> pool(hi - lo);
  std::iota(pool.begin(), pool.end(), lo);
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace

Population evolve_generation(const Population& current, const EvolutionParams& params, double mutant_frac,
                             const FitnessFn& fitness, Rng& rng, std::size_t* decode_count) {
  if (params.elite_parents > params.total_parents) {
    throw std::invalid_argument("pi_e must not exceed pi_t");
  }
  if (params.total_parents < 2) throw std::invalid_argument("pi_t must be at least 2");
  const std::size_t p = current.size();
  if (p == 0) return current;
  const std::size_t n = current.members.front().genes.size();
  const GenerationLayout layout = generation_layout(p, params.elite_fraction, mutant_frac);

  Population next;
  next.members.reserve(p);
  for (std::size_t i = 0; i < layout.elite; ++i) next.members.push_back(current.members[i]);
  for (std::size_t i = 0; i < layout.mutants; ++i) next.members.push_back(random_chromosome(n, rng));

  // Small populations cannot always provide pi_e elite / pi_t - pi_e other
  // parents; the draw is clamped to what exists.
  const std::size_t elite_parents = std::min(params.elite_parents, layout.elite);
  const std::size_t other_parents = std::min(params.total_parents - params.elite_parents, p - layout.elite);
  std::vector<const Chromosome*> parents;
  for (std::size_t i = 0; i < layout.offspring; ++i) {
    auto chosen = sample_without_replacement(0, layout.elite, elite_parents, rng);
    const auto others = sample_without_replacement(layout.elite, p, other_parents, rng);
    chosen.insert(chosen.end(), others.begin(), others.end());
    // Members are sorted, so index order is rank order.
    std::sort(chosen.begin(), chosen.end());
    parents.clear();
    for (const std::size_t idx : chosen) parents.push_back(&current.members[idx]);
    Chromosome child;
    if (parents.size() >= 2) {
      child.genes = multi_parent_crossover(parents, params.bias, rng);
    } else {
      child = random_chromosome(n, rng);
    }
    next.members.push_back(std::move(child));
  }

  const std::size_t decodes = decode_population(next, fitness, rng, params.infeasible_retries, params.workers);
  if (decode_count) *decode_count += decodes;
  return next;
}

}  // namespace vrpod
