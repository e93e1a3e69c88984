#include <benchmark/benchmark.h>

#include <vector>

#include "vrpod/decoder.hpp"
#include "vrpod/engine.hpp"
#include "vrpod/ipr.hpp"
#include "vrpod/vnd.hpp"

namespace {

using namespace vrpod;

const Instance& instance(int n) {
  static std::vector<std::pair<int, Instance>> cache;
  for (const auto& [k, inst] : cache) {
    if (k == n) return inst;
  }
  cache.emplace_back(n, generate_instance(n, NetworkType::Mixed, 1));
  return cache.back().second;
}

void BM_Decode(benchmark::State& state) {
  const auto& inst = instance(static_cast<int>(state.range(0)));
  const DecoderContext ctx{&inst, 0.95, 0.6};
  Rng rng(1);
  std::vector<Chromosome> pool;
  for (int i = 0; i < 64; ++i) pool.push_back(random_chromosome(inst.chromosome_length(), rng));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode(pool[i++ % pool.size()].genes, ctx).fitness);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Decode)->Arg(25)->Arg(50)->Arg(100);

void BM_EvolveGeneration(benchmark::State& state) {
  const auto& inst = instance(static_cast<int>(state.range(0)));
  const auto fitness = make_fitness_fn(DecoderContext{&inst, 0.95, 0.6});
  Rng rng(2);
  auto pop = init_population(inst.chromosome_length(), population_size(3.0, inst.chromosome_length()), rng);
  decode_population(pop, fitness, rng, 10, 1);
  const EvolutionParams params;
  for (auto _ : state) {
    pop = evolve_generation(pop, params, 0.1, fitness, rng);
    benchmark::DoNotOptimize(pop.best().fitness);
  }
}
BENCHMARK(BM_EvolveGeneration)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Kendall(benchmark::State& state) {
  Rng rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_chromosome(n, rng);
  const auto b = random_chromosome(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(kendall_tau_distance(a.genes, b.genes));
}
BENCHMARK(BM_Kendall)->Arg(40)->Arg(160);

void BM_IprPath(benchmark::State& state) {
  const auto& inst = instance(25);
  const auto fitness = make_fitness_fn(DecoderContext{&inst, 0.95, 0.6});
  Rng rng(4);
  const auto base = random_chromosome(inst.chromosome_length(), rng);
  const auto guide = random_chromosome(inst.chromosome_length(), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ipr_per(base, guide, inst.num_customers(), 0.7, fitness).best.fitness);
  }
}
BENCHMARK(BM_IprPath)->Unit(benchmark::kMillisecond);

void BM_Vnd(benchmark::State& state) {
  const auto& inst = instance(static_cast<int>(state.range(0)));
  const DecoderContext ctx{&inst, 0.95, 0.6};
  Rng rng(5);
  Solution start;
  for (bool found = false; !found;) {
    const auto d = decode(random_chromosome(inst.chromosome_length(), rng).genes, ctx);
    found = d.feasible();
    start = d.solution;
  }
  for (auto _ : state) benchmark::DoNotOptimize(vnd(start, inst, 0.6).objective);
}
BENCHMARK(BM_Vnd)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_SolveIterations(benchmark::State& state) {
  const auto& inst = instance(25);
  auto params = default_params(25, Variant::VM);
  params.max_iterations = 20;
  for (auto _ : state) benchmark::DoNotOptimize(solve(inst, params).cost);
}
BENCHMARK(BM_SolveIterations)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
