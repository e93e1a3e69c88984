#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vrpod/engine.hpp"

namespace vrpod::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;  // ran, but the result is negative (infeasible, no solution)
inline constexpr int kBadInput = 2;  // missing or malformed files and parameters

struct RunOptions {
  std::string variant = "vm";
  std::optional<std::uint64_t> seed;
  std::optional<double> time_limit;
  std::optional<std::size_t> wi;
  std::optional<std::string> params_path;
  std::optional<std::size_t> max_iterations;
};

/// Tuned defaults for the instance size, then the parameter file, then flags.
SolverParams resolve_params(const Instance& inst, const RunOptions& opts);

/// Seed of run r derived from the base seed.
std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run);

struct SolveOptions {
  std::string instance_path;
  RunOptions run;
  std::optional<double> target;
  std::string out_dir = ".";
};
int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err);

/// Reference costs keyed by instance name: exact/best-known and MP baseline.
struct Reference {
  std::optional<double> cost;
  std::optional<double> mp;
};
std::map<std::string, Reference> read_references(const std::string& path);

/// 100 * (cost - reference) / reference; used for both Gap% and RelGap%.
double percent_gap(double cost, double reference);

struct BenchmarkOptions {
  std::string instance_dir;
  std::size_t runs = 30;
  RunOptions run;
  std::optional<std::string> refs_path;
  std::string out_dir = ".";
};
/// Writes runs.csv (one row per run) and summary.csv (one row per instance
/// plus AVG) into out_dir and echoes the summary.
int cmd_benchmark(const BenchmarkOptions& opts, std::ostream& out, std::ostream& err);

struct TttOptions {
  std::string instance_path;
  double target = 0.0;
  std::size_t runs = 60;
  RunOptions run;
  std::optional<std::string> out_path;
};
/// CSV with one row per run: run,seed,time_to_target ("inf" when never hit).
int cmd_ttt(const TttOptions& opts, std::ostream& out, std::ostream& err);

struct GenerateOptions {
  int customers = 25;
  std::string type = "C";
  std::uint64_t seed = 1;
  std::optional<int> company;
  std::optional<int> ods;
  std::optional<std::string> out_path;
};
int cmd_generate(const GenerateOptions& opts, std::ostream& out, std::ostream& err);

int cmd_validate(const std::string& instance_path, const std::string& solution_path, double rho,
                 std::ostream& out, std::ostream& err);

struct OracleOptions {
  std::string instance_path;
  double rho = 0.6;
  std::size_t budget = 50'000'000;
  std::optional<std::string> out_path;
};
int cmd_oracle(const OracleOptions& opts, std::ostream& out, std::ostream& err);

struct ExportOptions {
  std::string instance_path;
  double rho = 0.6;
  std::optional<double> big_m;
  std::optional<std::string> out_path;
};
int cmd_export(const ExportOptions& opts, std::ostream& out, std::ostream& err);

/// Column headers of the emitted CSV files.
inline constexpr const char* kTraceHeader = "iteration,seconds,cost";
inline constexpr const char* kRunsHeader = "instance,run,seed,cost,seconds,iterations,stop";
inline constexpr const char* kSummaryHeader = "instance,runs,mean_cost,best_cost,mean_seconds,gap_pct,relgap_pct";
inline constexpr const char* kTttHeader = "run,seed,time_to_target";

}  // namespace vrpod::cli
