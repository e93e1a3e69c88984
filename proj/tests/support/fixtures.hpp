#pragma once

#include <vector>

#include "vrpod/instance.hpp"

namespace vrpod::testing {

inline Customer customer(int id, double x, double y, int demand = 1, TimeWindow w = {0.0, kInfinity},
                         double service = 0.0) {
  return Customer{id, {x, y}, demand, w, service};
}

inline OccasionalDriver od(int id, double x, double y, int capacity = 10, TimeWindow w = {0.0, kInfinity}) {
  return OccasionalDriver{id, {x, y}, capacity, w};
}

inline CompanyFleet fleet(int count, int capacity = 100, TimeWindow depot = {0.0, 1000.0}) {
  return CompanyFleet{count, capacity, depot};
}

/// Depot (0,0), one customer at (3,4), one company driver.
inline Instance one_customer_company() {
  return make_instance("one-company", {0, 0}, {customer(1, 3, 4)}, fleet(1), {});
}

/// Depot (0,0), one customer at (3,4), one company driver and one OD heading to (6,8).
inline Instance one_customer_with_od() {
  return make_instance("one-od", {0, 0}, {customer(1, 3, 4)}, fleet(1), {od(1, 6, 8)});
}

/// Tiny generated instances with two company drivers and two ODs.
inline Instance tiny_generated(int customers, std::uint64_t seed, NetworkType type = NetworkType::Random) {
  GeneratorOptions opts;
  opts.company_drivers = 2;
  opts.occasional_drivers = 2;
  return generate_instance(customers, type, seed, opts);
}

}  // namespace vrpod::testing
