#include "vrpod/solution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace vrpod {

std::size_t destination_node(const Instance& inst, const DriverRef& driver) {
  return driver.kind == DriverKind::Company ? inst.end_node() : inst.od_node(driver.index);
}

double start_time(const Instance& inst, const DriverRef& driver) {
  return driver.kind == DriverKind::Company ? inst.fleet.depot_window.open : inst.ods[driver.index].window.open;
}

double deadline(const Instance& inst, const DriverRef& driver) {
  return driver.kind == DriverKind::Company ? inst.fleet.depot_window.close : inst.ods[driver.index].window.close;
}

int capacity(const Instance& inst, const DriverRef& driver) {
  return driver.kind == DriverKind::Company ? inst.fleet.capacity : inst.ods[driver.index].capacity;
}

double compensation(const DriverRef& driver, double rho) {
  return driver.kind == DriverKind::Company ? 1.0 : rho;
}

double route_cost(const Instance& inst, const DriverRef& driver, std::span<const std::size_t> visits,
                  double rho) {
  if (visits.empty()) return 0.0;
  double arcs = 0.0;
  std::size_t at = Instance::origin_node();
  for (const std::size_t c : visits) {
    const std::size_t node = inst.customer_node(c);
    arcs += inst.cost(at, node);
    at = node;
  }
  const std::size_t dest = destination_node(inst, driver);
  arcs += inst.cost(at, dest);
  if (driver.kind == DriverKind::Company) return arcs;
  return rho * arcs - inst.cost(Instance::origin_node(), dest);
}

bool route_schedule(const Instance& inst, const DriverRef& driver, std::span<const std::size_t> visits,
                    std::vector<double>* times) {
  if (times) times->clear();
  int load = 0;
  double clock = start_time(inst, driver);
  std::size_t at = Instance::origin_node();
  double service = 0.0;
  bool ok = true;
  for (const std::size_t c : visits) {
    const auto& cust = inst.customers[c];
    const std::size_t node = inst.customer_node(c);
    const double arrival = std::max(clock + service + inst.time(at, node), cust.window.open);
    if (times) times->push_back(arrival);
    if (arrival > cust.window.close) ok = false;
    load += cust.demand;
    clock = arrival;
    service = cust.service_time;
    at = node;
  }
  if (load > capacity(inst, driver)) ok = false;
  if (!visits.empty() && clock + service + inst.time(at, destination_node(inst, driver)) > deadline(inst, driver)) {
    ok = false;
  }
  return ok;
}

double evaluate_objective(const Solution& solution, const Instance& inst, double rho) {
  double total = 0.0;
  for (const auto& r : solution.routes) total += route_cost(inst, r.driver, r.visits, rho);
  return total;
}

void refresh(Solution& solution, const Instance& inst, double rho) {
  for (auto& r : solution.routes) {
    route_schedule(inst, r.driver, r.visits, &r.arrival_times);
    r.load = 0;
    for (const std::size_t c : r.visits) r.load += inst.customers[c].demand;
  }
  solution.objective = evaluate_objective(solution, inst, rho);
}

std::string FeasibilityReport::summary() const {
  if (violations.empty()) return "feasible";
  std::ostringstream out;
  out << violations.size() << " violation(s)";
  for (const auto& v : violations) out << "\n  [" << v.kind << "] " << v.message;
  return out.str();
}

namespace {

std::string driver_name(const DriverRef& d) {
  return (d.kind == DriverKind::Company ? "company driver " : "occasional driver ") + std::to_string(d.index + 1);
}

}  // namespace

FeasibilityReport check_feasible(const Solution& solution, const Instance& inst) {
  FeasibilityReport report;
  auto add = [&](std::string kind, std::string message) {
    report.violations.push_back({std::move(kind), std::move(message)});
  };

  std::vector<int> served(inst.num_customers(), 0);
  std::vector<int> company_used(inst.num_company(), 0);
  std::vector<int> od_used(inst.num_ods(), 0);

  for (const auto& route : solution.routes) {
    const auto& d = route.driver;
    const std::size_t limit = d.kind == DriverKind::Company ? inst.num_company() : inst.num_ods();
    if (d.index >= limit) {
      add("driver", "route references nonexistent " + driver_name(d));
      continue;
    }
    if (route.visits.empty()) continue;
    auto& used = d.kind == DriverKind::Company ? company_used[d.index] : od_used[d.index];
    if (++used > 1) add("driver", driver_name(d) + " has more than one route");

    bool indices_ok = true;
    for (const std::size_t c : route.visits) {
      if (c >= inst.num_customers()) {
        add("coverage", driver_name(d) + " visits nonexistent customer index " + std::to_string(c));
        indices_ok = false;
      } else {
        ++served[c];
      }
    }
    if (!indices_ok) continue;

    int load = 0;
    for (const std::size_t c : route.visits) load += inst.customers[c].demand;
    if (load > capacity(inst, d)) {
      add("capacity", driver_name(d) + " carries " + std::to_string(load) + " > capacity " +
                          std::to_string(capacity(inst, d)));
    }

    const bool has_times = !route.arrival_times.empty();
    if (has_times && route.arrival_times.size() != route.visits.size()) {
      add("schedule", driver_name(d) + " has " + std::to_string(route.arrival_times.size()) +
                          " arrival times for " + std::to_string(route.visits.size()) + " visits");
      continue;
    }

    // Walk the schedule. Reported times are accepted when they are reachable
    // and inside windows (waiting is allowed); otherwise the earliest schedule
    // is used.
    double ready = start_time(inst, d);
    std::size_t at = Instance::origin_node();
    for (std::size_t pos = 0; pos < route.visits.size(); ++pos) {
      const std::size_t c = route.visits[pos];
      const auto& cust = inst.customers[c];
      const std::size_t node = inst.customer_node(c);
      const double earliest = std::max(ready + inst.time(at, node), cust.window.open);
      double begin = earliest;
      if (has_times) {
        const double reported = route.arrival_times[pos];
        if (reported + 1e-9 < earliest) {
          add("schedule", "customer " + std::to_string(cust.id) + " reported at " + std::to_string(reported) +
                              " before earliest possible " + std::to_string(earliest));
        } else {
          begin = reported;
        }
      }
      if (begin > cust.window.close + 1e-9) {
        add("time window", "customer " + std::to_string(cust.id) + " served at " + std::to_string(begin) +
                               " after window close " + std::to_string(cust.window.close) + " by " +
                               driver_name(d));
      }
      ready = begin + cust.service_time;
      at = node;
    }
    const double finish = ready + inst.time(at, destination_node(inst, d));
    if (finish > deadline(inst, d) + 1e-9) {
      add("deadline", driver_name(d) + " reaches its destination at " + std::to_string(finish) + " after " +
                          std::to_string(deadline(inst, d)));
    }
  }

  for (std::size_t c = 0; c < served.size(); ++c) {
    if (served[c] == 0) add("coverage", "customer " + std::to_string(inst.customers[c].id) + " is not served");
    if (served[c] > 1) {
      add("coverage", "customer " + std::to_string(inst.customers[c].id) + " is served " +
                          std::to_string(served[c]) + " times");
    }
  }
  return report;
}

std::string solution_to_json(const Solution& solution, const Instance& inst, double rho) {
  nlohmann::json routes = nlohmann::json::array();
  for (const auto& r : solution.routes) {
    if (r.visits.empty()) continue;
    std::vector<int> ids;
    for (const std::size_t c : r.visits) ids.push_back(inst.customers[c].id);
    routes.push_back({{"driver",
                       {{"kind", r.driver.kind == DriverKind::Company ? "company" : "occasional"},
                        {"index", r.driver.index + 1}}},
                      {"visits", ids},
                      {"arrival_times", r.arrival_times},
                      {"load", r.load}});
  }
  nlohmann::json doc = {{"instance", inst.name},
                        {"rho", rho},
                        {"objective", solution.objective},
                        {"routes", routes}};
  return doc.dump(2);
}

Solution solution_from_json(const std::string& text) {
  Solution solution;
  try {
    const auto doc = nlohmann::json::parse(text);
    solution.objective = doc.value("objective", 0.0);
    for (const auto& r : doc.at("routes")) {
      Route route;
      const auto& driver = r.at("driver");
      const auto kind = driver.at("kind").get<std::string>();
      if (kind == "company") {
        route.driver.kind = DriverKind::Company;
      } else if (kind == "occasional") {
        route.driver.kind = DriverKind::Occasional;
      } else {
        throw ValidationError("unknown driver kind '" + kind + "'");
      }
      const int index = driver.at("index").get<int>();
      if (index < 1) throw ValidationError("driver index must be >= 1");
      route.driver.index = static_cast<std::size_t>(index - 1);
      for (const int id : r.at("visits").get<std::vector<int>>()) {
        if (id < 1) throw ValidationError("customer id must be >= 1");
        route.visits.push_back(static_cast<std::size_t>(id - 1));
      }
      if (r.contains("arrival_times")) route.arrival_times = r.at("arrival_times").get<std::vector<double>>();
      route.load = r.value("load", 0);
      solution.routes.push_back(std::move(route));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed solution JSON: ") + e.what());
  }
  return solution;
}

}  // namespace vrpod
