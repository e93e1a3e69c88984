#include "vrpod/engine.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "vrpod/decoder.hpp"
#include "vrpod/parallel.hpp"
#include "vrpod/random.hpp"
#include "vrpod/vnd.hpp"

namespace vrpod {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::VM: return "vm";
    case Variant::VMPlusL: return "vm+l";
    case Variant::MP: return "mp";
  }
  return "vm";
}

Variant variant_from_string(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "vm") return Variant::VM;
  if (lower == "vm+l" || lower == "vml" || lower == "vm-l") return Variant::VMPlusL;
  if (lower == "mp") return Variant::MP;
  throw std::invalid_argument("unknown variant '" + std::string(text) + "' (expected vm, vm+l or mp)");
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::Empty: return "empty";
    case StopReason::TimeLimit: return "time_limit";
    case StopReason::NoImprovement: return "no_improvement";
    case StopReason::IterationLimit: return "iteration_limit";
    case StopReason::TargetReached: return "target_reached";
  }
  return "empty";
}

SolverParams default_params(std::size_t n_customers, Variant variant) {
  if (n_customers == 0) throw std::invalid_argument("default_params: need at least one customer");
  SolverParams p;
  const bool small = n_customers <= 25;
  const bool large = n_customers > 50;
  p.phi = BiasFunction::Polynomial;
  p.sel = PairSelection::Random;

  if (variant == Variant::VMPlusL) {
    p.use_vnd = true;
    if (small) {
      p.pct_e = 0.10, p.pct0_vm = 0.13, p.pct_mi = 0.10, p.pi_t = 9, p.pi_e = 5;
      p.md = 0.59, p.pct_p = 0.50, p.alpha = 10, p.m = 3, p.prDel = 0.95, p.h = 100;
    } else {
      p.pct_e = 0.16, p.pct0_vm = 0.16, p.pct_mi = 0.23, p.pi_t = 10, p.pi_e = 7;
      p.md = 0.38, p.pct_p = 0.46, p.alpha = 3, p.m = 5, p.prDel = 0.99, p.h = large ? 100 : 300;
    }
  } else {
    if (small) {
      p.pct_e = 0.16, p.pct0_vm = 0.1, p.pct_mi = 0.1, p.pi_t = 4, p.pi_e = 2;
      p.md = 0.2, p.pct_p = 0.7, p.alpha = 7, p.m = 4, p.prDel = 0.95, p.h = 100;
    } else {
      p.pct_e = 0.22, p.pct0_vm = 0.05, p.pct_mi = 0.1, p.pi_t = 7, p.pi_e = 2;
      p.md = 0.25, p.pct_p = 0.96, p.alpha = 3, p.m = 6, p.prDel = 0.99, p.h = large ? 100 : 300;
    }
    if (variant == Variant::MP) p.pct_mi = 0.0;
  }

  // Test sizes 5/10/15, then 25/50/100; nearest row wins.
  struct WiRow {
    std::size_t n;
    std::size_t wi;
  };
  constexpr WiRow rows[] = {{5, 50}, {10, 750}, {15, 2000}, {25, 2500}, {50, 1500}, {100, 1000}};
  const WiRow* best = &rows[0];
  for (const auto& row : rows) {
    const auto gap = [&](const WiRow& r) { return r.n > n_customers ? r.n - n_customers : n_customers - r.n; };
    if (gap(row) < gap(*best)) best = &row;
  }
  p.wi = best->wi;
  p.rho = 0.6;
  p.time_limit_seconds = 900.0;
  return p;
}

void validate_params(const SolverParams& p) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("parameter out of range: ") + what);
  };
  require(p.alpha >= 1.0, "alpha >= 1");
  require(p.m >= 1, "m >= 1");
  require(p.pct_e > 0.0 && p.pct_e < 1.0, "0 < pct_e < 1");
  require(p.pct0_vm >= 0.0 && p.pct0_vm <= 0.3, "pct0_vm in [0, 0.3]");
  require(p.pct_mi >= 0.0 && p.pct_mi <= 0.3, "pct_mi in [0, 0.3]");
  require(p.pi_t >= 2, "pi_t >= 2");
  require(p.pi_e <= p.pi_t, "pi_e <= pi_t");
  require(p.md >= 0.0 && p.md <= 1.0, "md in [0, 1]");
  require(p.pct_p >= 0.0 && p.pct_p <= 1.0, "pct_p in [0, 1]");
  require(p.prDel > 0.0 && p.prDel <= 1.0, "prDel in (0, 1]");
  require(p.rho >= 0.0, "rho >= 0");
  require(p.time_limit_seconds > 0.0, "time_limit_seconds > 0");
  require(p.workers >= 1, "workers >= 1");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("bad value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw std::invalid_argument("bad boolean '" + std::string(value) + "' for " + std::string(key));
}

}  // namespace

void set_param(SolverParams& p, std::string_view key, std::string_view raw) {
  const std::string_view v = trim(raw);
  if (key == "alpha") p.alpha = parse_number<double>(key, v);
  else if (key == "m") p.m = parse_number<std::size_t>(key, v);
  else if (key == "pct_e") p.pct_e = parse_number<double>(key, v);
  else if (key == "pct0_vm") p.pct0_vm = parse_number<double>(key, v);
  else if (key == "pct_mi") p.pct_mi = parse_number<double>(key, v);
  else if (key == "pi_t") p.pi_t = parse_number<std::size_t>(key, v);
  else if (key == "pi_e") p.pi_e = parse_number<std::size_t>(key, v);
  else if (key == "phi") p.phi = bias_function_from_string(v);
  else if (key == "sel") p.sel = pair_selection_from_string(v);
  else if (key == "md") p.md = parse_number<double>(key, v);
  else if (key == "pct_p") p.pct_p = parse_number<double>(key, v);
  else if (key == "prDel") p.prDel = parse_number<double>(key, v);
  else if (key == "rho") p.rho = parse_number<double>(key, v);
  else if (key == "h") p.h = parse_number<std::size_t>(key, v);
  else if (key == "wi") p.wi = parse_number<std::size_t>(key, v);
  else if (key == "time_limit_seconds") p.time_limit_seconds = parse_number<double>(key, v);
  else if (key == "seed") p.seed = parse_number<std::uint64_t>(key, v);
  else if (key == "use_vnd") p.use_vnd = parse_bool(key, v);
  else if (key == "literal_mutant_schedule") p.literal_mutant_schedule = parse_bool(key, v);
  else if (key == "max_iterations") p.max_iterations = parse_number<std::size_t>(key, v);
  else if (key == "target_cost") p.target_cost = parse_number<double>(key, v);
  else if (key == "workers") p.workers = parse_number<unsigned>(key, v);
  else if (key == "rescue_rejected") p.rescue_rejected = parse_bool(key, v);
  else if (key == "segmented_distance") p.segmented_distance = parse_bool(key, v);
  else throw std::invalid_argument("unknown parameter '" + std::string(key) + "'");
}

void apply_param_text(SolverParams& p, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key=value");
    }
    set_param(p, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void apply_param_file(SolverParams& p, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open parameter file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_param_text(p, buf.str());
}

std::string format_params(const SolverParams& p) {
  std::ostringstream out;
  out.precision(17);
  out << "alpha=" << p.alpha << '\n'
      << "m=" << p.m << '\n'
      << "pct_e=" << p.pct_e << '\n'
      << "pct0_vm=" << p.pct0_vm << '\n'
      << "pct_mi=" << p.pct_mi << '\n'
      << "pi_t=" << p.pi_t << '\n'
      << "pi_e=" << p.pi_e << '\n'
      << "phi=" << to_string(p.phi) << '\n'
      << "sel=" << to_string(p.sel) << '\n'
      << "md=" << p.md << '\n'
      << "pct_p=" << p.pct_p << '\n'
      << "prDel=" << p.prDel << '\n'
      << "rho=" << p.rho << '\n'
      << "h=" << p.h << '\n'
      << "wi=" << p.wi << '\n'
      << "time_limit_seconds=" << p.time_limit_seconds << '\n'
      << "seed=" << p.seed << '\n'
      << "use_vnd=" << (p.use_vnd ? "true" : "false") << '\n'
      << "literal_mutant_schedule=" << (p.literal_mutant_schedule ? "true" : "false") << '\n'
      << "workers=" << p.workers << '\n'
      << "rescue_rejected=" << (p.rescue_rejected ? "true" : "false") << '\n'
      << "segmented_distance=" << (p.segmented_distance ? "true" : "false") << '\n';
  if (p.max_iterations) out << "max_iterations=" << *p.max_iterations << '\n';
  if (p.target_cost) out << "target_cost=" << *p.target_cost << '\n';
  return out.str();
}

int mutant_level(std::size_t stall, std::size_t h, bool literal) {
  if (h == 0 || stall == 0) return 0;
  if (literal) {
    if (stall >= h / 8) return 3;
    if (stall >= h / 4) return 2;
    if (stall >= h / 2) return 1;
    return 0;
  }
  const std::size_t m1 = h / 2;
  const std::size_t m2 = m1 + h / 4;
  const std::size_t m3 = m2 + h / 8;
  if (stall >= m3) return 3;
  if (stall >= m2) return 2;
  if (stall >= m1) return 1;
  return 0;
}

std::optional<double> record_target_hit(const RunStats& stats, double target) {
  for (const auto& point : stats.trace) {
    if (point.cost <= target) return point.seconds;
  }
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

// Encoded local-search results often lose customers to random refusals when
// decoded with prDel < 1. The refusal draws depend on the key buckets, so
// order-preserving re-spacings of the keys give the same orders a few more
// chances to decode cleanly.
constexpr int kRespacings = 30;

Chromosome respaced(const Chromosome& c, std::size_t split, Rng& rng) {
  Chromosome out;
  out.genes = c.genes;
  const auto redraw = [&](std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> idx(hi - lo);
    std::iota(idx.begin(), idx.end(), lo);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return c.genes[a] < c.genes[b]; });
    std::vector<double> keys(idx.size());
    for (auto& k : keys) k = rng.uniform();
    std::sort(keys.begin(), keys.end());
    for (std::size_t t = 0; t < idx.size(); ++t) out.genes[idx[t]] = keys[t];
  };
  redraw(0, split);
  redraw(split, c.genes.size());
  return out;
}

class Solver {
 public:
  Solver(const Instance& inst, const SolverParams& params, const SolverHooks& hooks)
      : inst_(inst), params_(params), hooks_(hooks), start_(Clock::now()),
        deadline_(start_ + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(params.time_limit_seconds))),
        rng_(derive_seed(params.seed, 0xC0FFEEull)) {
    ctx_.instance = &inst_;
    ctx_.delivery_probability = params_.prDel;
    ctx_.rho = params_.rho;
    ctx_.rescue_rejected = params_.rescue_rejected;
    fitness_ = hooks_.fitness ? hooks_.fitness : make_fitness_fn(ctx_);

    evo_.elite_fraction = params_.pct_e;
    evo_.total_parents = params_.pi_t;
    evo_.elite_parents = params_.pi_e;
    evo_.bias = params_.phi;
    evo_.workers = 1;

    ipr_.path_fraction = params_.pct_p;
    ipr_.min_distance = params_.md;
    ipr_.selection = params_.sel;
    ipr_.segmented_distance = params_.segmented_distance;
  }

  SolveResult run() {
    SolveResult result;
    if (inst_.num_customers() == 0) {
      result.found = true;
      result.cost = 0.0;
      stats_.iterations = 1;
      stats_.trace.push_back({0, elapsed(), 0.0});
      stats_.stop = StopReason::Empty;
      stats_.seconds = elapsed();
      result.stats = std::move(stats_);
      return result;
    }

    n_ = inst_.chromosome_length();
    p_ = population_size(params_.alpha, n_);
    reseed(params_.seed);
    absorb_populations(0);

    std::size_t iteration = 0;
    std::size_t stall = 0;      // since last improvement or restart
    std::size_t no_improve = 0;  // since last improvement
    int level = 0;
    std::size_t restarts = 0;

    while (true) {
      if (Clock::now() >= deadline_) {
        stats_.stop = StopReason::TimeLimit;
        break;
      }
      if (params_.target_cost && best_cost_ <= *params_.target_cost) {
        stats_.stop = StopReason::TargetReached;
        break;
      }
      if (no_improve >= params_.wi) {
        stats_.stop = StopReason::NoImprovement;
        break;
      }
      if (params_.max_iterations && iteration >= *params_.max_iterations) {
        stats_.stop = StopReason::IterationLimit;
        break;
      }
      ++iteration;

      const double frac = mutant_fraction({params_.pct0_vm, params_.pct_mi, level});
      evolve_all(frac);
      run_ipr(frac);

      if (absorb_populations(iteration)) {
        stall = 0;
        no_improve = 0;
      } else {
        ++stall;
        ++no_improve;
      }

      const int next_level = mutant_level(stall, params_.h, params_.literal_mutant_schedule);
      if (next_level != level) {
        level = next_level;
        stats_.level_changes.push_back({iteration, stall, level});
      }

      if (params_.h > 0 && stall >= params_.h) {
        ++restarts;
        if (restart(iteration, restarts)) no_improve = 0;
        stall = 0;
        if (level != 0) {
          level = 0;
          stats_.level_changes.push_back({iteration, 0, 0});
        }
      }
    }

    stats_.iterations = iteration;
    stats_.seconds = elapsed();
    if (best_cost_ < kInfinity) {
      result.found = true;
      result.cost = best_cost_;
      if (best_solution_) {
        result.solution = *best_solution_;
      } else {
        result.solution = decode(best_.genes, ctx_).solution;
        if (hooks_.fitness) refresh(result.solution, inst_, params_.rho);
      }
    }
    result.stats = std::move(stats_);
    return result;
  }

 private:
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  void reseed(std::uint64_t seed) {
    pops_.assign(params_.m, {});
    rngs_.clear();
    for (std::size_t k = 0; k < params_.m; ++k) rngs_.emplace_back(derive_seed(seed, k));
    std::vector<std::size_t> counts(params_.m, 0);
    parallel_for(params_.m, params_.workers, [&](std::size_t k) {
      pops_[k] = init_population(n_, p_, rngs_[k]);
      counts[k] = decode_population(pops_[k], fitness_, rngs_[k], evo_.infeasible_retries, 1);
    });
    for (const auto c : counts) stats_.decodes += c;
  }

  void evolve_all(double frac) {
    std::vector<std::size_t> counts(params_.m, 0);
    parallel_for(params_.m, params_.workers, [&](std::size_t k) {
      pops_[k] = evolve_generation(pops_[k], evo_, frac, fitness_, rngs_[k], &counts[k]);
    });
    for (const auto c : counts) stats_.decodes += c;
  }

  void run_ipr(double frac) {
    const std::size_t elite = generation_layout(p_, params_.pct_e, frac).elite;
    const auto pair = select_pair(pops_, elite, ipr_, inst_.num_customers(), rng_);
    if (!pair) return;
    ++stats_.ipr_invocations;
    const auto& [a, b] = *pair;
    IprLimits limits;
    limits.deadline = deadline_;
    auto res = ipr_per(pops_[a.population].members[a.member], pops_[b.population].members[b.member],
                       inst_.num_customers(), params_.pct_p, fitness_, limits);
    stats_.decodes += res.decodes;
    if (!(res.best.fitness < kInfinity)) return;
    Population& pop = pops_[a.population];
    if (res.best.fitness < pop.members.back().fitness) {
      pop.members.back() = std::move(res.best);
      pop.sort();
    }
  }

  /// Updates the incumbent from the populations; true on strict improvement.
  bool absorb_populations(std::size_t iteration) {
    const Chromosome* top = nullptr;
    for (const auto& pop : pops_) {
      if (pop.size() && (!top || pop.best().fitness < top->fitness)) top = &pop.best();
    }
    if (!top || !(top->fitness < best_cost_ - kCostEpsilon)) return false;
    best_ = *top;
    best_cost_ = top->fitness;
    best_solution_.reset();
    stats_.trace.push_back({iteration, elapsed(), best_cost_});
    return true;
  }

  /// Local search on the incumbent, then reseeding around the best chromosome.
  /// Returns true when the local search improved the incumbent.
  bool restart(std::size_t iteration, std::size_t counter) {
    bool improved = false;
    if (params_.use_vnd && !hooks_.fitness && best_cost_ < kInfinity) {
      ++stats_.vnd_invocations;
      const Solution start = best_solution_ ? *best_solution_ : decode(best_.genes, ctx_).solution;
      const auto now = Clock::now();
      const auto budget = now < deadline_ ? (deadline_ - now) / 10 : Clock::duration::zero();
      Solution improved_solution = vnd(start, inst_, params_.rho, now + budget);
      if (improved_solution.objective < best_cost_ - kCostEpsilon) {
        best_cost_ = improved_solution.objective;
        Chromosome encoded = encode(improved_solution, inst_);
        encoded.fitness = fitness_(encoded.genes);
        ++stats_.decodes;
        for (int k = 0; k < kRespacings && encoded.fitness > best_cost_ + kCostEpsilon; ++k) {
          Chromosome candidate = respaced(encoded, inst_.num_customers(), rng_);
          candidate.fitness = fitness_(candidate.genes);
          ++stats_.decodes;
          if (candidate.fitness < encoded.fitness) encoded = std::move(candidate);
        }
        if (encoded.fitness < best_.fitness) best_ = std::move(encoded);
        best_solution_ = std::move(improved_solution);
        stats_.trace.push_back({iteration, elapsed(), best_cost_});
        improved = true;
      }
    }

    const std::uint64_t seed = derive_seed(params_.seed, counter);
    reseed(seed);
    Population& first = pops_.front();
    first.members.back() = best_;
    first.sort();
    stats_.restarts.push_back({iteration, elapsed(), best_cost_, seed});
    if (hooks_.on_restart) hooks_.on_restart({iteration, &best_, &pops_});
    return improved;
  }

  const Instance& inst_;
  const SolverParams& params_;
  const SolverHooks& hooks_;
  Clock::time_point start_;
  Clock::time_point deadline_;
  Rng rng_;
  DecoderContext ctx_;
  FitnessFn fitness_;
  EvolutionParams evo_;
  IprParams ipr_;

  std::size_t n_ = 0;
  std::size_t p_ = 0;
  std::vector<Population> pops_;
  std::vector<Rng> rngs_;

  Chromosome best_;
  double best_cost_ = kInfinity;
  std::optional<Solution> best_solution_;  // set when the incumbent came from local search
  RunStats stats_;
};

}  // namespace

SolveResult solve(const Instance& instance, const SolverParams& params, const SolverHooks& hooks) {
  validate_params(params);
  Solver solver(instance, params, hooks);
  return solver.run();
}

}  // namespace vrpod
