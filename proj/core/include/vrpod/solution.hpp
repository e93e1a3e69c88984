#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vrpod/instance.hpp"

namespace vrpod {

enum class DriverKind { Company, Occasional };

struct DriverRef {
  DriverKind kind = DriverKind::Company;
  std::size_t index = 0;
  friend bool operator==(const DriverRef&, const DriverRef&) = default;
  friend auto operator<=>(const DriverRef&, const DriverRef&) = default;
};

struct Route {
  DriverRef driver;
  std::vector<std::size_t> visits;   // 0-based customer indices
  std::vector<double> arrival_times;  // service start per visit; may be empty (recomputed on demand)
  int load = 0;
  friend bool operator==(const Route&, const Route&) = default;
};

struct Solution {
  std::vector<Route> routes;
  double objective = 0.0;
  friend bool operator==(const Solution&, const Solution&) = default;
};

/// Absolute tolerance for objective comparisons.
inline constexpr double kCostEpsilon = 1e-6;

/// Destination node of a driver (b for company drivers, v_k for ODs).
std::size_t destination_node(const Instance& inst, const DriverRef& driver);
/// Earliest departure from the depot.
double start_time(const Instance& inst, const DriverRef& driver);
/// Latest arrival at the destination.
double deadline(const Instance& inst, const DriverRef& driver);
int capacity(const Instance& inst, const DriverRef& driver);
/// Compensation multiplier applied to arc costs: 1 for company drivers, rho for ODs.
double compensation(const DriverRef& driver, double rho);

/// Objective contribution of one route. Empty routes cost nothing; a used OD
/// pays rho times its path cost minus its direct-trip cost.
double route_cost(const Instance& inst, const DriverRef& driver, std::span<const std::size_t> visits,
                  double rho);

/// Earliest-start schedule of a route. Returns false when a capacity, window
/// or deadline is violated. `times` receives service-start times when non-null.
bool route_schedule(const Instance& inst, const DriverRef& driver, std::span<const std::size_t> visits,
                    std::vector<double>* times = nullptr);

/// Sum of route costs.
double evaluate_objective(const Solution& solution, const Instance& inst, double rho);

/// Fills arrival_times and load of each route with the earliest schedule, and
/// sets objective. Infeasible routes still get times for the visits reached.
void refresh(Solution& solution, const Instance& inst, double rho);

struct Violation {
  std::string kind;  // "coverage", "capacity", "time window", "deadline", "driver", "schedule"
  std::string message;
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  bool feasible() const noexcept { return violations.empty(); }
  std::string summary() const;
};

/// Independent feasibility check against the model's constraints. Violations
/// are returned as data.
FeasibilityReport check_feasible(const Solution& solution, const Instance& inst);

// JSON representation used by the CLI. Customer and driver numbers are the
// 1-based file ids.
std::string solution_to_json(const Solution& solution, const Instance& inst, double rho);
Solution solution_from_json(const std::string& text);

}  // namespace vrpod
