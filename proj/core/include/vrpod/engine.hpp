#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vrpod/genetics.hpp"
#include "vrpod/instance.hpp"
#include "vrpod/ipr.hpp"
#include "vrpod/solution.hpp"

namespace vrpod {

enum class Variant { VM, VMPlusL, MP };

std::string_view to_string(Variant v);
/// Accepts "vm", "vm+l", "mp" (case-insensitive).
Variant variant_from_string(std::string_view text);

struct SolverParams {
  double alpha = 7.0;
  std::size_t m = 4;
  double pct_e = 0.16;
  double pct0_vm = 0.1;
  double pct_mi = 0.1;
  std::size_t pi_t = 4;
  std::size_t pi_e = 2;
  BiasFunction phi = BiasFunction::Polynomial;
  PairSelection sel = PairSelection::Random;
  double md = 0.2;
  double pct_p = 0.7;
  double prDel = 0.95;
  double rho = 0.6;
  std::size_t h = 100;   // stall length that triggers a restart; 0 disables restarts
  std::size_t wi = 2500;  // consecutive non-improving iterations before stopping
  double time_limit_seconds = 900.0;
  std::uint64_t seed = 1;
  bool use_vnd = false;
  /// Escalate at stall >= h/8, h/4, h/2 read as independent thresholds
  /// instead of the cumulative milestones h/2, h/2+h/4, h/2+h/4+h/8.
  bool literal_mutant_schedule = false;

  std::optional<std::size_t> max_iterations;
  std::optional<double> target_cost;  // stop once the incumbent reaches it
  unsigned workers = 1;
  bool rescue_rejected = true;
  bool segmented_distance = true;
};

/// Tuned defaults for an instance with `n_customers` customers.
SolverParams default_params(std::size_t n_customers, Variant variant);

/// Throws std::invalid_argument when a field is outside its admissible range.
void validate_params(const SolverParams& params);

/// Sets one field from its textual value. Keys are the field names.
void set_param(SolverParams& params, std::string_view key, std::string_view value);

/// Applies `key=value` lines ('#' starts a comment) on top of `params`.
void apply_param_text(SolverParams& params, std::string_view text);
void apply_param_file(SolverParams& params, const std::string& path);

/// key=value rendering of every field, one per line, readable by apply_param_text.
std::string format_params(const SolverParams& params);

struct TracePoint {
  std::size_t iteration = 0;
  double seconds = 0.0;
  double cost = kInfinity;
};

struct RestartEvent {
  std::size_t iteration = 0;
  double seconds = 0.0;
  double cost = kInfinity;  // incumbent after the optional local search
  std::uint64_t seed = 0;
};

struct MutantLevelChange {
  std::size_t iteration = 0;
  std::size_t stall = 0;
  int level = 0;
};

enum class StopReason { Empty, TimeLimit, NoImprovement, IterationLimit, TargetReached };

std::string_view to_string(StopReason r);

struct RunStats {
  std::vector<TracePoint> trace;  // one point per incumbent improvement
  std::vector<RestartEvent> restarts;
  std::vector<MutantLevelChange> level_changes;
  std::size_t decodes = 0;
  std::size_t ipr_invocations = 0;
  std::size_t vnd_invocations = 0;
  std::size_t iterations = 0;
  double seconds = 0.0;
  StopReason stop = StopReason::Empty;
};

struct SolveResult {
  bool found = false;  // false when no feasible chromosome was ever decoded
  Solution solution;
  double cost = kInfinity;
  RunStats stats;
};

/// State handed to the restart observer once the populations are reseeded.
struct RestartSnapshot {
  std::size_t iteration = 0;
  const Chromosome* kept = nullptr;
  const std::vector<Population>* populations = nullptr;
};

struct SolverHooks {
  /// Replaces the decoder fitness (solutions are still rebuilt with the decoder).
  FitnessFn fitness;
  std::function<void(const RestartSnapshot&)> on_restart;
};

/// Mutant level for a stall of `stall` iterations since the last improvement
/// or restart.
int mutant_level(std::size_t stall, std::size_t h, bool literal);

SolveResult solve(const Instance& instance, const SolverParams& params, const SolverHooks& hooks = {});

/// Seconds at which the trace first reaches `target`, if ever.
std::optional<double> record_target_hit(const RunStats& stats, double target);

}  // namespace vrpod
