#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "vrpod/instance.hpp"
#include "vrpod/solution.hpp"

namespace vrpod {

enum class OracleStatus { Optimal, Infeasible, BudgetExceeded };

std::string_view to_string(OracleStatus status);

struct OracleResult {
  OracleStatus status = OracleStatus::Infeasible;
  Solution solution;  // best found; proven optimal only when status == Optimal
  double cost = kInfinity;
  std::size_t nodes = 0;
};

/// Depth-first branch and bound over route sets. Occasional drivers are
/// expanded first, then interchangeable company drivers in canonical order.
OracleResult exhaustive_solve(const Instance& inst, double rho, std::size_t node_budget = 50'000'000);

/// Mixed-integer model of the instance in CPLEX LP format. Node indices
/// follow Instance: 0 is the depot origin, customers 1..|C|, OD destinations
/// next, and the company destination last. When `big_m` is absent it is the
/// largest finite time-window bound plus the largest travel and service time;
/// throws std::invalid_argument if a driver deadline is unbounded.
std::string export_milp(const Instance& inst, double rho, std::optional<double> big_m = std::nullopt);

}  // namespace vrpod
