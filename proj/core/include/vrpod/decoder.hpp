#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vrpod/genetics.hpp"
#include "vrpod/instance.hpp"
#include "vrpod/random.hpp"
#include "vrpod/solution.hpp"

namespace vrpod {

/// Chromosome layout: [customers | company drivers | occasional drivers].
struct DecoderContext {
  const Instance* instance = nullptr;
  double delivery_probability = 1.0;  // prDel
  double rho = 0.6;
  /// Offer a customer once more with delivery() forced true when every
  /// refusal came from the random draw.
  bool rescue_rejected = true;
};

/// sum_i 2^(n-i) * floor(100 * gene_i), wrapping modulo 2^64.
std::uint64_t seed_gen(std::span<const double> genes);

/// Per-decode stream of accept/reject draws, seeded from the chromosome.
class DeliveryStream {
 public:
  DeliveryStream(std::uint64_t seed, double probability) : rng_(seed), probability_(probability) {}
  /// Draws the next value and accepts when it falls below prDel.
  bool delivery() { return rng_.uniform() < probability_; }

 private:
  SplitMix64 rng_;
  double probability_;
};

/// Mutable per-driver state while decoding.
struct DriverState {
  DriverRef driver;
  std::size_t tail = Instance::origin_node();
  double clock = 0.0;  // time the driver is ready to leave `tail`
  int remaining_capacity = 0;
  std::vector<std::size_t> visits;
  std::vector<double> arrival_times;

  static DriverState start(const Instance& inst, const DriverRef& driver);
};

bool capacity_check(const DriverState& state, const Instance& inst, std::size_t customer);

/// The customer window admits the arrival and the driver can still reach
/// its destination before its deadline afterwards.
bool time_check(const DriverState& state, const Instance& inst, std::size_t customer);

/// Arrival (service start) at `customer` if appended to `state`.
double arrival_time(const DriverState& state, const Instance& inst, std::size_t customer);

struct Decoded {
  Solution solution;  // routes of used drivers, ordered by driver index
  double fitness = kInfinity;
  bool feasible() const noexcept { return fitness < kInfinity; }
};

/// Driver reference for position `j` of the driver segment.
DriverRef driver_at(const Instance& inst, std::size_t j);

Decoded decode(std::span<const double> genes, const DecoderContext& context);

/// Fitness-only wrapper for the genetic operators.
FitnessFn make_fitness_fn(const DecoderContext& context);

/// Builds a chromosome from routes, aiming for decode(encode(s)) == s when
/// delivery is always accepted. The search replays the decoder; when no order
/// reproducing the routes is found within `node_budget`, it falls back to keys
/// ordered by (route rank, position). Throws ValidationError on infeasible input.
Chromosome encode(const Solution& solution, const Instance& inst, std::size_t node_budget = 200000);

}  // namespace vrpod
