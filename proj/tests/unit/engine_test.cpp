#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "vrpod/engine.hpp"
#include "vrpod/oracle.hpp"

namespace vrpod {
namespace {

TEST(DefaultParams, SmallVm) {
  const auto p = default_params(25, Variant::VM);
  EXPECT_DOUBLE_EQ(p.pct_e, 0.16);
  EXPECT_DOUBLE_EQ(p.pct0_vm, 0.1);
  EXPECT_DOUBLE_EQ(p.pct_mi, 0.1);
  EXPECT_EQ(p.pi_t, 4u);
  EXPECT_EQ(p.pi_e, 2u);
  EXPECT_EQ(p.phi, BiasFunction::Polynomial);
  EXPECT_EQ(p.sel, PairSelection::Random);
  EXPECT_DOUBLE_EQ(p.md, 0.2);
  EXPECT_DOUBLE_EQ(p.pct_p, 0.7);
  EXPECT_DOUBLE_EQ(p.alpha, 7.0);
  EXPECT_EQ(p.m, 4u);
  EXPECT_DOUBLE_EQ(p.prDel, 0.95);
  EXPECT_EQ(p.h, 100u);
  EXPECT_FALSE(p.use_vnd);
}

TEST(DefaultParams, MediumVm) {
  const auto p = default_params(50, Variant::VM);
  EXPECT_DOUBLE_EQ(p.alpha, 3.0);
  EXPECT_EQ(p.m, 6u);
  EXPECT_DOUBLE_EQ(p.prDel, 0.99);
  EXPECT_EQ(p.h, 300u);
}

TEST(DefaultParams, MediumVmPlusLocalSearch) {
  const auto p = default_params(50, Variant::VMPlusL);
  EXPECT_DOUBLE_EQ(p.pct_e, 0.16);
  EXPECT_DOUBLE_EQ(p.pct0_vm, 0.16);
  EXPECT_DOUBLE_EQ(p.pct_mi, 0.23);
  EXPECT_EQ(p.pi_t, 10u);
  EXPECT_EQ(p.pi_e, 7u);
  EXPECT_DOUBLE_EQ(p.md, 0.38);
  EXPECT_DOUBLE_EQ(p.pct_p, 0.46);
  EXPECT_DOUBLE_EQ(p.alpha, 3.0);
  EXPECT_EQ(p.m, 5u);
  EXPECT_EQ(p.h, 300u);
  EXPECT_TRUE(p.use_vnd);
}

TEST(DefaultParams, BaselineHasFixedMutantFraction) {
  EXPECT_EQ(default_params(25, Variant::MP).pct_mi, 0.0);
  EXPECT_EQ(default_params(5, Variant::VM).wi, 50u);
  EXPECT_EQ(default_params(100, Variant::VM).wi, 1000u);
}

TEST(Variant, Names) {
  EXPECT_EQ(variant_from_string("VM+L"), Variant::VMPlusL);
  EXPECT_EQ(variant_from_string("mp"), Variant::MP);
  EXPECT_EQ(to_string(Variant::VM), "vm");
  EXPECT_THROW(variant_from_string("ga"), std::invalid_argument);
}

TEST(Params, TextOverridesAndRoundTrip) {
  auto p = default_params(25, Variant::VM);
  apply_param_text(p, "# tuned\nalpha = 3\nphi=1/r^2\nsel=bestS\nwi=10  # short\nuse_vnd=true\n");
  EXPECT_DOUBLE_EQ(p.alpha, 3.0);
  EXPECT_EQ(p.sel, PairSelection::Best);
  EXPECT_EQ(p.wi, 10u);
  EXPECT_TRUE(p.use_vnd);

  SolverParams q;
  apply_param_text(q, format_params(p));
  EXPECT_EQ(format_params(q), format_params(p));
}

TEST(Params, RejectsUnknownKeysAndBadValues) {
  SolverParams p;
  EXPECT_THROW(set_param(p, "gamma", "1"), std::invalid_argument);
  EXPECT_THROW(set_param(p, "alpha", "many"), std::invalid_argument);
  p.pct_mi = 0.5;
  EXPECT_THROW(validate_params(p), std::invalid_argument);
  p = SolverParams{};
  p.pi_e = 5;
  EXPECT_THROW(validate_params(p), std::invalid_argument);
}

TEST(MutantLevel, CumulativeMilestones) {
  // h = 100: 50, 75, 87
  EXPECT_EQ(mutant_level(0, 100, false), 0);
  EXPECT_EQ(mutant_level(49, 100, false), 0);
  EXPECT_EQ(mutant_level(50, 100, false), 1);
  EXPECT_EQ(mutant_level(74, 100, false), 1);
  EXPECT_EQ(mutant_level(75, 100, false), 2);
  EXPECT_EQ(mutant_level(86, 100, false), 2);
  EXPECT_EQ(mutant_level(87, 100, false), 3);
  EXPECT_EQ(mutant_level(99, 100, false), 3);
  EXPECT_EQ(mutant_level(500, 0, false), 0);
}

TEST(MutantLevel, LiteralThresholds) {
  // h/8 = 12 is reached first, so the level jumps straight to 3.
  EXPECT_EQ(mutant_level(11, 100, true), 0);
  EXPECT_EQ(mutant_level(12, 100, true), 3);
}

SolverParams quick_params(std::size_t iterations) {
  SolverParams p;
  p.alpha = 1.0;
  p.m = 2;
  p.h = 100;
  p.wi = 100000;
  p.time_limit_seconds = 600;
  p.max_iterations = iterations;
  return p;
}

TEST(Solve, ConstantFitnessScheduleAndRestarts) {
  const auto inst = testing::tiny_generated(6, 1);
  auto params = quick_params(250);
  std::vector<std::size_t> restart_iterations;
  SolverHooks hooks;
  hooks.fitness = [](std::span<const double>) { return 42.0; };
  hooks.on_restart = [&](const RestartSnapshot& snap) {
    restart_iterations.push_back(snap.iteration);
    std::size_t copies = 0;
    for (const auto& pop : *snap.populations) {
      copies += static_cast<std::size_t>(std::count(pop.members.begin(), pop.members.end(), *snap.kept));
    }
    EXPECT_EQ(copies, 1u);
  };
  const auto res = solve(inst, params, hooks);
  ASSERT_TRUE(res.found);
  EXPECT_EQ(res.cost, 42.0);
  EXPECT_EQ(res.stats.iterations, 250u);
  EXPECT_EQ(res.stats.stop, StopReason::IterationLimit);
  EXPECT_EQ(restart_iterations, (std::vector<std::size_t>{100, 200}));
  ASSERT_EQ(res.stats.restarts.size(), 2u);

  std::vector<std::pair<std::size_t, int>> changes;
  for (const auto& c : res.stats.level_changes) changes.emplace_back(c.iteration, c.level);
  const std::vector<std::pair<std::size_t, int>> expected{
      {50, 1}, {75, 2}, {87, 3}, {100, 0}, {150, 1}, {175, 2}, {187, 3}, {200, 0}, {250, 1}};
  EXPECT_EQ(changes, expected);
}

TEST(Solve, EmptyInstance) {
  const auto inst = make_instance("e", {0, 0}, {}, testing::fleet(1), {});
  const auto res = solve(inst, SolverParams{});
  EXPECT_TRUE(res.found);
  EXPECT_EQ(res.cost, 0.0);
  EXPECT_TRUE(res.solution.routes.empty());
  EXPECT_EQ(res.stats.iterations, 1u);
}

std::vector<std::pair<std::size_t, double>> trace_of(const SolveResult& r) {
  std::vector<std::pair<std::size_t, double>> out;
  for (const auto& t : r.stats.trace) out.emplace_back(t.iteration, t.cost);
  return out;
}

TEST(Solve, DeterministicAcrossWorkerCounts) {
  const auto inst = generate_instance(10, NetworkType::Mixed, 4);
  auto params = default_params(10, Variant::VM);
  params.max_iterations = 40;
  params.seed = 99;
  params.workers = 1;
  const auto a = solve(inst, params);
  params.workers = 3;
  const auto b = solve(inst, params);
  const auto c = solve(inst, params);
  EXPECT_EQ(a.cost, b.cost);
  EXPECT_EQ(trace_of(a), trace_of(b));
  EXPECT_EQ(trace_of(b), trace_of(c));
  EXPECT_EQ(a.solution, b.solution);
}

TEST(Solve, ResultIsFeasibleAndMonotone) {
  const auto inst = generate_instance(15, NetworkType::Clustered, 2);
  for (const auto variant : {Variant::VM, Variant::VMPlusL}) {
    auto params = default_params(15, variant);
    params.max_iterations = 60;
    params.h = 20;
    const auto res = solve(inst, params);
    ASSERT_TRUE(res.found);
    EXPECT_TRUE(check_feasible(res.solution, inst).feasible());
    EXPECT_NEAR(res.cost, evaluate_objective(res.solution, inst, params.rho), 1e-9);
    for (std::size_t i = 1; i < res.stats.trace.size(); ++i) {
      EXPECT_LT(res.stats.trace[i].cost, res.stats.trace[i - 1].cost);
    }
    // A restart needs h stalled iterations since the previous one.
    std::size_t previous = 0;
    for (const auto& r : res.stats.restarts) {
      EXPECT_GE(r.iteration - previous, 20u);
      previous = r.iteration;
    }
  }
}

TEST(Solve, StopsAfterWiNonImprovingIterations) {
  const auto inst = testing::tiny_generated(5, 3);
  auto params = default_params(5, Variant::VM);
  params.wi = 15;
  params.h = 0;
  const auto res = solve(inst, params);
  EXPECT_EQ(res.stats.stop, StopReason::NoImprovement);
  EXPECT_EQ(res.stats.iterations - res.stats.trace.back().iteration, 15u);
}

TEST(Solve, StopsAtTarget) {
  const auto inst = testing::tiny_generated(5, 2);
  const auto oracle = exhaustive_solve(inst, 0.6);
  auto params = default_params(5, Variant::VM);
  params.target_cost = oracle.cost + 1e-6;
  params.wi = 100000;
  params.time_limit_seconds = 60;
  const auto res = solve(inst, params);
  EXPECT_EQ(res.stats.stop, StopReason::TargetReached);
  EXPECT_LE(res.cost, oracle.cost + 1e-6);
}

TEST(Solve, MatchesOracleOnFiveCustomers) {
  const auto inst = testing::tiny_generated(5, 11);
  const auto oracle = exhaustive_solve(inst, 0.6);
  ASSERT_EQ(oracle.status, OracleStatus::Optimal);
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto params = default_params(5, Variant::VM);
    params.seed = seed;
    params.time_limit_seconds = 10;
    const auto res = solve(inst, params);
    EXPECT_GE(res.cost, oracle.cost - 1e-9);
    if (res.cost <= oracle.cost + 1e-6) ++hits;
  }
  EXPECT_GE(hits, 9);
}

TEST(RecordTargetHit, Boundaries) {
  RunStats stats;
  stats.trace = {{0, 0.01, 50.0}, {3, 0.5, 40.0}, {9, 1.5, 30.0}};
  EXPECT_FALSE(record_target_hit(stats, 29.9).has_value());
  EXPECT_EQ(record_target_hit(stats, 1e300), 0.01);
  EXPECT_EQ(record_target_hit(stats, 30.0), 1.5);
  EXPECT_EQ(record_target_hit(stats, 45.0), 0.5);
}

}  // namespace
}  // namespace vrpod
