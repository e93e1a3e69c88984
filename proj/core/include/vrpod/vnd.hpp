#pragma once

#include <chrono>
#include <optional>

#include "vrpod/instance.hpp"
#include "vrpod/solution.hpp"

namespace vrpod {

// Best-improvement neighborhood operators. Each takes a feasible solution and
// returns either the best feasible neighbor that lowers the objective by more
// than kCostEpsilon, or the input unchanged. Ties resolve to the first move in
// (route index, position) order. Empty routes are dropped from the output.

Solution two_opt(const Solution& s, const Instance& inst, double rho);
Solution move_node(const Solution& s, const Instance& inst, double rho);
Solution swap_inter(const Solution& s, const Instance& inst, double rho);
Solution swap_intra(const Solution& s, const Instance& inst, double rho);
/// Opens a route for the first unused company driver with one relocated
/// customer. Accepts the best such move when it does not worsen the objective.
Solution new_path(const Solution& s, const Instance& inst, double rho);
/// Same move, accepted only on strict improvement.
Solution new_path_best(const Solution& s, const Instance& inst, double rho);

struct VndStats {
  std::size_t improvements = 0;
  std::size_t scans = 0;
};

/// Cycles the six neighborhoods in order, returning to the first after each
/// improvement, until none improves or the deadline passes. Throws
/// ValidationError on infeasible input.
Solution vnd(const Solution& s, const Instance& inst, double rho,
             std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt,
             VndStats* stats = nullptr);

}  // namespace vrpod
