#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vrpod/genetics.hpp"
#include "vrpod/random.hpp"

namespace vrpod {

enum class PairSelection { Random, Best };  // randS, bestS

std::string_view to_string(PairSelection sel);
PairSelection pair_selection_from_string(std::string_view text);

struct IprParams {
  double path_fraction = 0.7;  // pct_p
  double min_distance = 0.2;   // md
  PairSelection selection = PairSelection::Random;
  /// Gate on the mean of per-segment distances (customers, drivers) instead
  /// of a single ranking over the whole vector.
  bool segmented_distance = true;
};

/// Normalized Kendall tau distance between the rankings induced by two key
/// vectors: discordant pairs / (n(n-1)/2). Ties rank by index.
double kendall_tau_distance(std::span<const double> a, std::span<const double> b);

/// Mean of the distances over [0, split) and [split, n). A segment with fewer
/// than two keys is skipped.
double segmented_kendall_tau_distance(std::span<const double> a, std::span<const double> b, std::size_t split);

struct MemberRef {
  std::size_t population = 0;
  std::size_t member = 0;
  friend bool operator==(const MemberRef&, const MemberRef&) = default;
};

/// Chooses (base, guide) among the elite sets (first `elite_size` members of
/// each population). Gives up after 10 attempts below the distance threshold.
std::optional<std::pair<MemberRef, MemberRef>> select_pair(std::span<const Population> populations,
                                                           std::size_t elite_size, const IprParams& params,
                                                           std::size_t num_customers, Rng& rng);

/// One evaluated candidate swap or committed step of the path walk.
struct IprEvent {
  enum class Kind { Evaluate, Commit, SkipAligned, SwitchToDrivers } kind;
  std::size_t index = 0;  // position in the index lists (0-based)
  std::size_t pos_a = 0;  // gene positions swapped in base
  std::size_t pos_b = 0;
  double value = kInfinity;
  friend bool operator==(const IprEvent&, const IprEvent&) = default;
};

struct IprResult {
  Chromosome best;  // best.fitness is +inf when no evaluated step was finite
  std::size_t decodes = 0;
  std::vector<IprEvent> trace;
};

struct IprLimits {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  bool record_trace = false;
};

/// Bidirectional permutation-based implicit path-relinking.
IprResult ipr_per(const Chromosome& base, const Chromosome& guide, std::size_t num_customers,
                  double path_fraction, const FitnessFn& fitness, const IprLimits& limits = {});

}  // namespace vrpod
