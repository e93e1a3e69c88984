#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vrpod/instance.hpp"
#include "vrpod/oracle.hpp"
#include "vrpod/parallel.hpp"
#include "vrpod/random.hpp"
#include "vrpod/solution.hpp"

namespace fs = std::filesystem;

namespace vrpod::cli {

namespace {

std::string fixed(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::fabs(v) < 0.5 * std::pow(10.0, -digits)) v = 0.0;  // no "-0.00"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

bool write_file(const fs::path& path, const std::string& text, std::ostream& err) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path);
  if (!f) {
    err << "error: cannot write '" << path.string() << "'\n";
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) return std::nullopt;
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

/// Loads an instance, reporting failures on `err`.
std::optional<Instance> open_instance(const std::string& path, std::ostream& err) {
  if (!fs::is_regular_file(path)) {
    err << "error: instance file '" << path << "' not found\n";
    return std::nullopt;
  }
  try {
    return load_instance(path);
  } catch (const ParseError& e) {
    err << "error: " << path << ": line " << e.line() << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << path << ": " << e.what() << '\n';
  }
  return std::nullopt;
}

std::string trace_csv(const RunStats& stats) {
  std::ostringstream s;
  s << kTraceHeader << '\n';
  for (const auto& p : stats.trace) s << p.iteration << ',' << fixed(p.seconds, 3) << ',' << fixed(p.cost, 6) << '\n';
  return s.str();
}

}  // namespace

std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run) { return derive_seed(base_seed, run); }

SolverParams resolve_params(const Instance& inst, const RunOptions& opts) {
  const Variant variant = variant_from_string(opts.variant);
  SolverParams p = default_params(std::max<std::size_t>(1, inst.num_customers()), variant);
  if (opts.params_path) apply_param_file(p, *opts.params_path);
  if (variant == Variant::MP) p.pct_mi = 0.0;
  if (variant == Variant::VMPlusL) p.use_vnd = true;
  if (opts.seed) p.seed = *opts.seed;
  if (opts.time_limit) p.time_limit_seconds = *opts.time_limit;
  if (opts.wi) p.wi = *opts.wi;
  if (opts.max_iterations) p.max_iterations = *opts.max_iterations;
  p.workers = worker_count_from_env();
  validate_params(p);
  return p;
}

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err) {
  const auto inst = open_instance(opts.instance_path, err);
  if (!inst) return kBadInput;
  SolverParams params;
  try {
    params = resolve_params(*inst, opts.run);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }
  if (opts.target) params.target_cost = *opts.target;

  const SolveResult result = solve(*inst, params);
  const std::string stem = inst->name.empty() ? fs::path(opts.instance_path).stem().string() : inst->name;
  const fs::path dir(opts.out_dir);
  if (!write_file(dir / (stem + ".stats.csv"), trace_csv(result.stats), err)) return kBadInput;
  if (!result.found) {
    out << "no feasible solution found; iterations " << result.stats.iterations << " time "
        << fixed(result.stats.seconds, 3) << '\n';
    return kFailure;
  }
  if (!write_file(dir / (stem + ".solution.json"), solution_to_json(result.solution, *inst, params.rho), err)) {
    return kBadInput;
  }
  out << "cost " << fixed(result.cost, 6) << " time " << fixed(result.stats.seconds, 3) << " iterations "
      << result.stats.iterations << " restarts " << result.stats.restarts.size() << " stop "
      << to_string(result.stats.stop) << '\n';
  return kOk;
}

std::map<std::string, Reference> read_references(const std::string& path) {
  const auto text = read_file(path);
  if (!text) throw std::runtime_error("cannot open reference file '" + path + "'");
  std::map<std::string, Reference> refs;
  std::istringstream in(*text);
  std::string line;
  bool header = true;
  auto parse = [](const std::string& field) -> std::optional<double> {
    if (field.empty()) return std::nullopt;
    return std::stod(field);
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.empty()) continue;
    fields.resize(3);
    refs[fields[0]] = Reference{parse(fields[1]), parse(fields[2])};
  }
  return refs;
}

double percent_gap(double cost, double reference) { return 100.0 * (cost - reference) / reference; }

int cmd_benchmark(const BenchmarkOptions& opts, std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(opts.instance_dir)) {
    err << "error: instance directory '" << opts.instance_dir << "' not found\n";
    return kBadInput;
  }
  std::map<std::string, Reference> refs;
  if (opts.refs_path) {
    try {
      refs = read_references(*opts.refs_path);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kBadInput;
    }
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(opts.instance_dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  const std::uint64_t base_seed = opts.run.seed.value_or(1);
  std::ostringstream runs_csv;
  std::ostringstream summary_csv;
  runs_csv << "# seed of run r = derive_seed(" << base_seed << ", r)\n" << kRunsHeader << '\n';
  summary_csv << "# variant " << opts.run.variant << ", " << opts.runs << " runs per instance, base seed " << base_seed
              << '\n'
              << kSummaryHeader << '\n';

  double sum_cost = 0.0, sum_best = 0.0, sum_seconds = 0.0, sum_gap = 0.0, sum_relgap = 0.0;
  std::size_t rows = 0, gap_rows = 0, relgap_rows = 0;
  for (const auto& file : files) {
    std::ostringstream quiet;
    auto inst = open_instance(file.string(), quiet);
    if (!inst) {
      err << "warning: skipping " << file.string() << ": " << quiet.str();
      continue;
    }
    const std::string name = inst->name.empty() ? file.stem().string() : inst->name;
    double cost_total = 0.0, seconds_total = 0.0, best = kInfinity;
    std::size_t found = 0;
    for (std::size_t r = 0; r < opts.runs; ++r) {
      RunOptions run = opts.run;
      run.seed = run_seed(base_seed, r);
      SolverParams params;
      try {
        params = resolve_params(*inst, run);
      } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
      }
      const SolveResult res = solve(*inst, params);
      runs_csv << name << ',' << r << ',' << *run.seed << ',' << fixed(res.cost, 6) << ','
               << fixed(res.stats.seconds, 3) << ',' << res.stats.iterations << ',' << to_string(res.stats.stop)
               << '\n';
      seconds_total += res.stats.seconds;
      if (res.found) {
        cost_total += res.cost;
        best = std::min(best, res.cost);
        ++found;
      }
    }
    const double mean_cost = found == opts.runs && found > 0 ? cost_total / static_cast<double>(found) : kInfinity;
    const double mean_seconds = opts.runs ? seconds_total / static_cast<double>(opts.runs) : 0.0;
    std::string gap, relgap;
    if (auto it = refs.find(name); it != refs.end() && std::isfinite(mean_cost)) {
      if (it->second.cost && *it->second.cost != 0.0) {
        const double g = percent_gap(mean_cost, *it->second.cost);
        gap = fixed(g, 2);
        sum_gap += g;
        ++gap_rows;
      }
      if (it->second.mp && *it->second.mp != 0.0) {
        const double g = percent_gap(mean_cost, *it->second.mp);
        relgap = fixed(g, 2);
        sum_relgap += g;
        ++relgap_rows;
      }
    }
    summary_csv << name << ',' << opts.runs << ',' << fixed(mean_cost, 6) << ',' << fixed(best, 6) << ','
                << fixed(mean_seconds, 3) << ',' << gap << ',' << relgap << '\n';
    sum_cost += mean_cost;
    sum_best += best;
    sum_seconds += mean_seconds;
    ++rows;
  }
  if (rows > 0) {
    const double n = static_cast<double>(rows);
    summary_csv << "AVG," << opts.runs << ',' << fixed(sum_cost / n, 6) << ',' << fixed(sum_best / n, 6) << ','
                << fixed(sum_seconds / n, 3) << ','
                << (gap_rows ? fixed(sum_gap / static_cast<double>(gap_rows), 2) : std::string()) << ','
                << (relgap_rows ? fixed(sum_relgap / static_cast<double>(relgap_rows), 2) : std::string()) << '\n';
  }
  const fs::path dir(opts.out_dir);
  if (!write_file(dir / "runs.csv", runs_csv.str(), err)) return kBadInput;
  if (!write_file(dir / "summary.csv", summary_csv.str(), err)) return kBadInput;
  out << summary_csv.str();
  return kOk;
}

int cmd_ttt(const TttOptions& opts, std::ostream& out, std::ostream& err) {
  const auto inst = open_instance(opts.instance_path, err);
  if (!inst) return kBadInput;
  const std::uint64_t base_seed = opts.run.seed.value_or(1);
  std::ostringstream csv;
  csv << "# target " << fixed(opts.target, 6) << ", seed of run r = derive_seed(" << base_seed << ", r)\n"
      << kTttHeader << '\n';
  for (std::size_t r = 0; r < opts.runs; ++r) {
    RunOptions run = opts.run;
    run.seed = run_seed(base_seed, r);
    SolverParams params;
    try {
      params = resolve_params(*inst, run);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kBadInput;
    }
    params.target_cost = opts.target;
    params.wi = std::numeric_limits<std::size_t>::max();  // only the target or the clock stops a run
    const SolveResult res = solve(*inst, params);
    const auto hit = res.found ? record_target_hit(res.stats, opts.target) : std::nullopt;
    csv << r << ',' << *run.seed << ',' << (hit ? fixed(*hit, 6) : std::string("inf")) << '\n';
  }
  if (opts.out_path && !write_file(*opts.out_path, csv.str(), err)) return kBadInput;
  out << csv.str();
  return kOk;
}

int cmd_generate(const GenerateOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    GeneratorOptions g;
    g.company_drivers = opts.company;
    g.occasional_drivers = opts.ods;
    const Instance inst = generate_instance(opts.customers, network_type_from_string(opts.type), opts.seed, g);
    const std::string text = serialize_instance(inst);
    if (opts.out_path) {
      if (!write_file(*opts.out_path, text, err)) return kBadInput;
      out << "wrote " << *opts.out_path << '\n';
    } else {
      out << text;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kOk;
}

int cmd_validate(const std::string& instance_path, const std::string& solution_path, double rho,
                 std::ostream& out, std::ostream& err) {
  const auto inst = open_instance(instance_path, err);
  if (!inst) return kBadInput;
  const auto text = read_file(solution_path);
  if (!text) {
    err << "error: solution file '" << solution_path << "' not found\n";
    return kBadInput;
  }
  Solution s;
  try {
    s = solution_from_json(*text);
  } catch (const std::exception& e) {
    err << "error: " << solution_path << ": " << e.what() << '\n';
    return kBadInput;
  }
  const auto report = check_feasible(s, *inst);
  if (!report.feasible()) {
    out << "infeasible\n" << report.summary() << '\n';
    return kFailure;
  }
  out << "feasible cost " << fixed(evaluate_objective(s, *inst, rho), 6) << '\n';
  return kOk;
}

int cmd_oracle(const OracleOptions& opts, std::ostream& out, std::ostream& err) {
  const auto inst = open_instance(opts.instance_path, err);
  if (!inst) return kBadInput;
  const OracleResult res = exhaustive_solve(*inst, opts.rho, opts.budget);
  out << to_string(res.status) << " cost " << fixed(res.cost, 6) << " nodes " << res.nodes << '\n';
  if (res.cost < kInfinity && opts.out_path) {
    if (!write_file(*opts.out_path, solution_to_json(res.solution, *inst, opts.rho), err)) return kBadInput;
  }
  return res.status == OracleStatus::Optimal ? kOk : kFailure;
}

int cmd_export(const ExportOptions& opts, std::ostream& out, std::ostream& err) {
  const auto inst = open_instance(opts.instance_path, err);
  if (!inst) return kBadInput;
  std::string lp;
  try {
    lp = export_milp(*inst, opts.rho, opts.big_m);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }
  if (opts.out_path) {
    if (!write_file(*opts.out_path, lp, err)) return kBadInput;
    out << "wrote " << *opts.out_path << '\n';
  } else {
    out << lp;
  }
  return kOk;
}

}  // namespace vrpod::cli
