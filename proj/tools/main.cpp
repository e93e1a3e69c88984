#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_run_flags(CLI::App& cmd, vrpod::cli::RunOptions& run) {
  cmd.add_option("--variant", run.variant, "vm, vm+l or mp")->check(CLI::IsMember({"vm", "vm+l", "mp"}));
  cmd.add_option("--seed", run.seed, "Base random seed");
  cmd.add_option("--time-limit", run.time_limit, "Wall-clock limit per run in seconds");
  cmd.add_option("--wi", run.wi, "Consecutive non-improving iterations before stopping");
  cmd.add_option("--params", run.params_path, "key=value parameter file");
  cmd.add_option("--iterations", run.max_iterations, "Iteration cap");
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = vrpod::cli;
  CLI::App app{"Vehicle routing with occasional drivers and time windows"};
  app.require_subcommand(1);

  cli::SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  solve_cmd->add_option("instance", solve.instance_path)->required();
  add_run_flags(*solve_cmd, solve.run);
  solve_cmd->add_option("--target", solve.target, "Stop once this cost is reached");
  solve_cmd->add_option("--out", solve.out_dir, "Output directory");

  cli::BenchmarkOptions bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "Seeded runs over a directory of instances");
  bench_cmd->add_option("instance_dir", bench.instance_dir)->required();
  add_run_flags(*bench_cmd, bench.run);
  bench_cmd->add_option("--runs", bench.runs, "Runs per instance");
  bench_cmd->add_option("--refs", bench.refs_path, "CSV with columns instance,reference,mp");
  bench_cmd->add_option("--out", bench.out_dir, "Output directory");

  cli::TttOptions ttt;
  auto* ttt_cmd = app.add_subcommand("ttt", "Time-to-target runs");
  ttt_cmd->add_option("instance", ttt.instance_path)->required();
  ttt_cmd->add_option("--target", ttt.target, "Target cost")->required();
  add_run_flags(*ttt_cmd, ttt.run);
  ttt_cmd->add_option("--runs", ttt.runs, "Number of runs");
  ttt_cmd->add_option("--out", ttt.out_path, "CSV output path");

  cli::GenerateOptions gen;
  auto* gen_cmd = app.add_subcommand("generate", "Generate a synthetic instance");
  gen_cmd->add_option("--customers,-n", gen.customers, "Number of customers");
  gen_cmd->add_option("--type", gen.type, "C, R or RC");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--company", gen.company, "Company drivers");
  gen_cmd->add_option("--ods", gen.ods, "Occasional drivers");
  gen_cmd->add_option("--out", gen.out_path, "Output path (stdout when absent)");

  std::string v_instance, v_solution;
  double v_rho = 0.6;
  auto* val_cmd = app.add_subcommand("validate", "Check a solution file for feasibility");
  val_cmd->add_option("instance", v_instance)->required();
  val_cmd->add_option("solution", v_solution)->required();
  val_cmd->add_option("--rho", v_rho, "Compensation factor");

  cli::OracleOptions oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact branch and bound for tiny instances");
  oracle_cmd->add_option("instance", oracle.instance_path)->required();
  oracle_cmd->add_option("--rho", oracle.rho, "Compensation factor");
  oracle_cmd->add_option("--budget", oracle.budget, "Search node budget");
  oracle_cmd->add_option("--out", oracle.out_path, "Solution output path");

  cli::ExportOptions exp;
  auto* exp_cmd = app.add_subcommand("export", "Write the MILP model in LP format");
  exp_cmd->add_option("instance", exp.instance_path)->required();
  exp_cmd->add_option("--rho", exp.rho, "Compensation factor");
  exp_cmd->add_option("--big-m", exp.big_m, "Big-M for time constraints");
  exp_cmd->add_option("--out", exp.out_path, "Output path (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kBadInput;
  }

  if (*solve_cmd) return cli::cmd_solve(solve, std::cout, std::cerr);
  if (*bench_cmd) return cli::cmd_benchmark(bench, std::cout, std::cerr);
  if (*ttt_cmd) return cli::cmd_ttt(ttt, std::cout, std::cerr);
  if (*gen_cmd) return cli::cmd_generate(gen, std::cout, std::cerr);
  if (*val_cmd) return cli::cmd_validate(v_instance, v_solution, v_rho, std::cout, std::cerr);
  if (*oracle_cmd) return cli::cmd_oracle(oracle, std::cout, std::cerr);
  if (*exp_cmd) return cli::cmd_export(exp, std::cout, std::cerr);
  return cli::kBadInput;
}
