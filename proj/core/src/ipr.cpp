#include "vrpod/ipr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace vrpod {

std::string_view to_string(PairSelection sel) { return sel == PairSelection::Random ? "randS" : "bestS"; }

PairSelection pair_selection_from_string(std::string_view text) {
  if (text == "randS" || text == "random") return PairSelection::Random;
  if (text == "bestS" || text == "best") return PairSelection::Best;
  throw std::invalid_argument("unknown pair selection '" + std::string(text) + "'");
}

namespace {

std::vector<std::size_t> ranks_of(std::span<const double> keys) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<std::size_t> rank(keys.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  return rank;
}

/// Positions in [lo, hi) ordered by non-decreasing key (stable).
void sort_segment(std::vector<std::size_t>& idx, std::span<const double> keys, std::size_t lo, std::size_t hi) {
  std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(lo), idx.begin() + static_cast<std::ptrdiff_t>(hi),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
}

}  // namespace

double kendall_tau_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("kendall_tau_distance: length mismatch");
  const std::size_t n = a.size();
  if (n < 2) throw std::invalid_argument("kendall_tau_distance: need at least two keys");
  const auto ra = ranks_of(a);
  const auto rb = ranks_of(b);
  std::size_t discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool up_a = ra[i] < ra[j];
      const bool up_b = rb[i] < rb[j];
      if (up_a != up_b) ++discordant;
    }
  }
  return static_cast<double>(discordant) / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

double segmented_kendall_tau_distance(std::span<const double> a, std::span<const double> b, std::size_t split) {
  if (a.size() != b.size()) throw std::invalid_argument("kendall_tau_distance: length mismatch");
  double sum = 0.0;
  int segments = 0;
  if (split >= 2) {
    sum += kendall_tau_distance(a.first(split), b.first(split));
    ++segments;
  }
  if (a.size() - split >= 2) {
    sum += kendall_tau_distance(a.subspan(split), b.subspan(split));
    ++segments;
  }
  return segments == 0 ? 0.0 : sum / segments;
}

std::optional<std::pair<MemberRef, MemberRef>> select_pair(std::span<const Population> populations,
                                                           std::size_t elite_size, const IprParams& params,
                                                           std::size_t num_customers, Rng& rng) {
  constexpr int kAttempts = 10;
  auto genes_of = [&](const MemberRef& ref) -> std::span<const double> {
    return populations[ref.population].members[ref.member].genes;
  };
  auto far_enough = [&](const MemberRef& x, const MemberRef& y) {
    const auto a = genes_of(x);
    const auto b = genes_of(y);
    if (a.size() < 2) return params.min_distance <= 0.0;
    const double d = params.segmented_distance ? segmented_kendall_tau_distance(a, b, num_customers)
                                               : kendall_tau_distance(a, b);
    return d >= params.min_distance;
  };
  auto elite_of = [&](std::size_t p) { return std::min(elite_size, populations[p].size()); };

  if (params.selection == PairSelection::Best) {
    std::vector<MemberRef> pool;
    for (std::size_t p = 0; p < populations.size(); ++p) {
      for (std::size_t m = 0; m < elite_of(p); ++m) pool.push_back({p, m});
    }
    std::stable_sort(pool.begin(), pool.end(), [&](const MemberRef& x, const MemberRef& y) {
      return populations[x.population].members[x.member].fitness <
             populations[y.population].members[y.member].fitness;
    });
    for (std::size_t k = 1; k < pool.size() && k <= static_cast<std::size_t>(kAttempts); ++k) {
      if (far_enough(pool[0], pool[k])) return std::pair{pool[0], pool[k]};
    }
    return std::nullopt;
  }

  const std::size_t m = populations.size();
  if (m == 0) return std::nullopt;
  if (m == 1 && elite_of(0) < 2) return std::nullopt;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    MemberRef a, b;
    if (m > 1) {
      a.population = rng.below(m);
      b.population = rng.below(m - 1);
      if (b.population >= a.population) ++b.population;
      if (elite_of(a.population) == 0 || elite_of(b.population) == 0) continue;
      a.member = rng.below(elite_of(a.population));
      b.member = rng.below(elite_of(b.population));
    } else {
      const std::size_t e = elite_of(0);
      a.member = rng.below(e);
      b.member = rng.below(e - 1);
      if (b.member >= a.member) ++b.member;
    }
    if (far_enough(a, b)) return std::pair{a, b};
  }
  return std::nullopt;
}

IprResult ipr_per(const Chromosome& base_in, const Chromosome& guide_in, std::size_t num_customers,
                  double path_fraction, const FitnessFn& fitness, const IprLimits& limits) {
  const std::size_t n = base_in.genes.size();
  if (guide_in.genes.size() != n) throw std::invalid_argument("ipr_per: length mismatch");
  if (num_customers > n) throw std::invalid_argument("ipr_per: more customers than genes");

  IprResult result;
  result.best.genes = base_in.genes;
  result.best.fitness = kInfinity;

  long long path_size = static_cast<long long>(std::ceil(static_cast<double>(n) * path_fraction - 1e-9));
  if (path_size <= 0 || n == 0) return result;

  std::vector<double> base = base_in.genes;
  std::vector<double> guide = guide_in.genes;

  // Index lists are built once, segment by segment, from the initial pair.
  std::vector<std::size_t> ib(n), ig(n);
  std::iota(ib.begin(), ib.end(), 0);
  std::iota(ig.begin(), ig.end(), 0);
  sort_segment(ib, base, 0, num_customers);
  sort_segment(ib, base, num_customers, n);
  sort_segment(ig, guide, 0, num_customers);
  sort_segment(ig, guide, num_customers, n);

  std::vector<std::size_t> remaining(num_customers);
  std::iota(remaining.begin(), remaining.end(), 0);
  bool driver_phase = false;

  auto out_of_time = [&] {
    return limits.deadline && std::chrono::steady_clock::now() >= *limits.deadline;
  };
  auto log = [&](IprEvent e) {
    if (limits.record_trace) result.trace.push_back(e);
  };

  std::size_t step = 0;
  while (step < n) {
    ++step;
    std::size_t best_index = n;  // sentinel for "none"
    double best_value = kInfinity;
    bool aligned = false;
    bool timed_out = false;

    for (std::size_t k = 0; k < remaining.size(); ++k) {
      const std::size_t i = remaining[k];
      if (ib[i] == ig[i]) {
        log({IprEvent::Kind::SkipAligned, i, ib[i], ig[i], kInfinity});
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(k));
        aligned = true;
        break;
      }
      if (out_of_time()) {
        timed_out = true;
        break;
      }
      std::swap(base[ib[i]], base[ig[i]]);
      const double value = fitness(base);
      std::swap(base[ib[i]], base[ig[i]]);
      ++result.decodes;
      log({IprEvent::Kind::Evaluate, i, ib[i], ig[i], value});
      if (value < best_value) {
        best_index = i;
        best_value = value;
      }
    }
    if (timed_out) break;

    if (best_index == n) {
      if (aligned) continue;
      if (driver_phase) break;
      // Customer positions exhausted: restart the walk over driver positions.
      remaining.resize(n - num_customers);
      std::iota(remaining.begin(), remaining.end(), num_customers);
      driver_phase = true;
      step = 0;
      log({IprEvent::Kind::SwitchToDrivers, 0, 0, 0, kInfinity});
      continue;
    }

    std::swap(base[ib[best_index]], base[ig[best_index]]);
    log({IprEvent::Kind::Commit, best_index, ib[best_index], ig[best_index], best_value});
    if (best_value < result.best.fitness) {
      result.best.genes = base;
      result.best.fitness = best_value;
    }
    remaining.erase(std::find(remaining.begin(), remaining.end(), best_index));
    std::swap(base, guide);
    if (--path_size == 0 || out_of_time()) break;
  }
  return result;
}

}  // namespace vrpod
