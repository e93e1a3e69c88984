#include "vrpod/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vrpod {

std::uint64_t seed_gen(std::span<const double> genes) {
  std::uint64_t seed = 0;
  for (const double g : genes) {
    const auto digit = static_cast<std::uint64_t>(std::clamp(std::floor(100.0 * g), 0.0, 99.0));
    seed = seed * 2 + digit;
  }
  return seed;
}

DriverState DriverState::start(const Instance& inst, const DriverRef& driver) {
  DriverState s;
  s.driver = driver;
  s.tail = Instance::origin_node();
  s.clock = start_time(inst, driver);
  s.remaining_capacity = capacity(inst, driver);
  return s;
}

bool capacity_check(const DriverState& state, const Instance& inst, std::size_t customer) {
  return state.remaining_capacity >= inst.customers[customer].demand;
}

double arrival_time(const DriverState& state, const Instance& inst, std::size_t customer) {
  const auto& c = inst.customers[customer];
  return std::max(state.clock + inst.time(state.tail, inst.customer_node(customer)), c.window.open);
}

bool time_check(const DriverState& state, const Instance& inst, std::size_t customer) {
  const auto& c = inst.customers[customer];
  const double a = arrival_time(state, inst, customer);
  if (a > c.window.close) return false;
  const double back = inst.time(inst.customer_node(customer), destination_node(inst, state.driver));
  return a + c.service_time + back <= deadline(inst, state.driver);
}

DriverRef driver_at(const Instance& inst, std::size_t j) {
  if (j < inst.num_company()) return {DriverKind::Company, j};
  return {DriverKind::Occasional, j - inst.num_company()};
}

namespace {

std::vector<std::size_t> sorted_indices(std::span<const double> keys) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  return order;
}

void append(DriverState& s, const Instance& inst, std::size_t customer, bool record) {
  const double a = arrival_time(s, inst, customer);
  s.clock = a + inst.customers[customer].service_time;
  s.tail = inst.customer_node(customer);
  s.remaining_capacity -= inst.customers[customer].demand;
  if (record) {
    s.visits.push_back(customer);
    s.arrival_times.push_back(a);
  }
}

template <bool BuildSolution>
Decoded decode_impl(std::span<const double> genes, const DecoderContext& ctx) {
  const Instance& inst = *ctx.instance;
  const std::size_t n_cust = inst.num_customers();
  const std::size_t n_drivers = inst.num_drivers();
  if (genes.size() != n_cust + n_drivers) {
    throw std::invalid_argument("chromosome length " + std::to_string(genes.size()) + " != " +
                                std::to_string(n_cust + n_drivers));
  }

  const auto customer_order = sorted_indices(genes.subspan(0, n_cust));
  const auto driver_order = sorted_indices(genes.subspan(n_cust));

  std::vector<DriverState> states;
  states.reserve(n_drivers);
  for (std::size_t j = 0; j < n_drivers; ++j) states.push_back(DriverState::start(inst, driver_at(inst, j)));

  DeliveryStream stream(seed_gen(genes), ctx.delivery_probability);
  double total = 0.0;
  Decoded out;

  for (const std::size_t c : customer_order) {
    const std::size_t node = inst.customer_node(c);
    DriverState* chosen = nullptr;
    bool refused_by_draw = false;
    // delivery() is drawn only for drivers that pass both checks.
    for (const std::size_t j : driver_order) {
      DriverState& s = states[j];
      if (capacity_check(s, inst, c) && time_check(s, inst, c)) {
        if (stream.delivery()) {
          chosen = &s;
          break;
        }
        refused_by_draw = true;
      }
    }
    if (!chosen && refused_by_draw && ctx.rescue_rejected) {
      for (const std::size_t j : driver_order) {
        DriverState& s = states[j];
        if (capacity_check(s, inst, c) && time_check(s, inst, c)) {
          chosen = &s;
          break;
        }
      }
    }
    if (!chosen) {
      out.fitness = kInfinity;
      return out;
    }
    total += inst.cost(chosen->tail, node) * compensation(chosen->driver, ctx.rho);
    append(*chosen, inst, c, BuildSolution);
  }

  for (const DriverState& s : states) {
    if (s.tail == Instance::origin_node()) continue;  // unused driver
    const std::size_t dest = destination_node(inst, s.driver);
    total += inst.cost(s.tail, dest) * compensation(s.driver, ctx.rho);
    if (s.driver.kind == DriverKind::Occasional) total -= inst.cost(Instance::origin_node(), dest);
  }
  out.fitness = total;

  if constexpr (BuildSolution) {
    for (DriverState& s : states) {
      if (s.visits.empty()) continue;
      Route r;
      r.driver = s.driver;
      r.load = capacity(inst, s.driver) - s.remaining_capacity;
      r.visits = std::move(s.visits);
      r.arrival_times = std::move(s.arrival_times);
      out.solution.routes.push_back(std::move(r));
    }
    out.solution.objective = total;
  }
  return out;
}

}  // namespace

Decoded decode(std::span<const double> genes, const DecoderContext& context) {
  return decode_impl<true>(genes, context);
}

FitnessFn make_fitness_fn(const DecoderContext& context) {
  return [context](std::span<const double> genes) { return decode_impl<false>(genes, context).fitness; };
}

// ---------------------------------------------------------------------------
// encode

namespace {

class ReplaySearch {
 public:
  ReplaySearch(const Instance& inst, const std::vector<const Route*>& routes, std::size_t budget)
      : inst_(inst), routes_(routes), budget_(budget), pos_(routes.size(), 0),
        placed_(inst.num_drivers(), false) {
    for (std::size_t j = 0; j < inst.num_drivers(); ++j) states_.push_back(DriverState::start(inst, driver_at(inst, j)));
    for (const auto* r : routes) {
      route_slot_.push_back(slot_of(r->driver));
      remaining_ += r->visits.size();
    }
    used_.assign(inst.num_drivers(), false);
    for (const std::size_t j : route_slot_) used_[j] = true;
  }

  bool run() { return search(); }

  const std::vector<std::size_t>& customer_order() const { return order_; }
  const std::vector<std::size_t>& driver_order() const { return sigma_; }

 private:
  std::size_t slot_of(const DriverRef& d) const {
    return d.kind == DriverKind::Company ? d.index : inst_.num_company() + d.index;
  }

  bool accepts(std::size_t j, std::size_t c) const {
    return capacity_check(states_[j], inst_, c) && time_check(states_[j], inst_, c);
  }

  /// All placed drivers ahead of `target` (or all placed, when target is not
  /// placed) refuse c.
  bool earlier_refuse(std::size_t target, std::size_t c) const {
    for (const std::size_t j : sigma_) {
      if (j == target) return true;
      if (accepts(j, c)) return false;
    }
    return true;
  }

  bool search() {
    if (remaining_ == 0) return true;
    if (nodes_++ >= budget_) return false;
    for (std::size_t r = 0; r < routes_.size(); ++r) {
      if (pos_[r] == routes_[r]->visits.size()) continue;
      const std::size_t c = routes_[r]->visits[pos_[r]];
      const std::size_t j = route_slot_[r];
      if (!accepts(j, c) || !earlier_refuse(j, c)) continue;

      if (placed_[j]) {
        if (step(r, c, j, {})) return true;
        continue;
      }
      if (step(r, c, j, {})) return true;
      // Alternative: unstarted used drivers that refuse c go ahead of j.
      std::vector<std::size_t> ahead;
      for (std::size_t k = 0; k < placed_.size(); ++k) {
        if (k != j && used_[k] && !placed_[k] && !accepts(k, c)) ahead.push_back(k);
      }
      if (!ahead.empty() && step(r, c, j, ahead)) return true;
      if (nodes_ >= budget_) return false;
    }
    return false;
  }

  bool step(std::size_t r, std::size_t c, std::size_t j, const std::vector<std::size_t>& ahead) {
    const std::size_t sigma_size = sigma_.size();
    for (const std::size_t k : ahead) {
      sigma_.push_back(k);
      placed_[k] = true;
    }
    const bool newly_placed = !placed_[j];
    if (newly_placed) {
      sigma_.push_back(j);
      placed_[j] = true;
    }
    const DriverState saved = states_[j];
    append(states_[j], inst_, c, false);
    ++pos_[r];
    --remaining_;
    order_.push_back(c);

    if (search()) return true;

    order_.pop_back();
    ++remaining_;
    --pos_[r];
    states_[j] = saved;
    for (std::size_t i = sigma_size; i < sigma_.size(); ++i) placed_[sigma_[i]] = false;
    sigma_.resize(sigma_size);
    return false;
  }

  const Instance& inst_;
  const std::vector<const Route*>& routes_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  std::size_t remaining_ = 0;
  std::vector<std::size_t> pos_;
  std::vector<bool> placed_;
  std::vector<bool> used_;
  std::vector<std::size_t> route_slot_;
  std::vector<DriverState> states_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> sigma_;
};

}  // namespace

Chromosome encode(const Solution& solution, const Instance& inst, std::size_t node_budget) {
  const auto report = check_feasible(solution, inst);
  if (!report.feasible()) throw ValidationError("cannot encode an infeasible solution: " + report.summary());

  std::vector<const Route*> routes;
  for (const auto& r : solution.routes) {
    if (!r.visits.empty()) routes.push_back(&r);
  }

  const std::size_t n_cust = inst.num_customers();
  const std::size_t n_drivers = inst.num_drivers();
  std::vector<std::size_t> customer_order;
  std::vector<std::size_t> driver_order;

  ReplaySearch search(inst, routes, node_budget);
  if (search.run()) {
    customer_order = search.customer_order();
    driver_order = search.driver_order();
  } else {
    for (const auto* r : routes) {
      customer_order.insert(customer_order.end(), r->visits.begin(), r->visits.end());
      driver_order.push_back(r->driver.kind == DriverKind::Company ? r->driver.index
                                                                   : n_drivers - inst.num_ods() + r->driver.index);
    }
  }
  std::vector<bool> listed(n_drivers, false);
  for (const std::size_t j : driver_order) listed[j] = true;
  for (std::size_t j = 0; j < n_drivers; ++j) {
    if (!listed[j]) driver_order.push_back(j);
  }

  Chromosome chr;
  chr.genes.assign(n_cust + n_drivers, 0.0);
  for (std::size_t t = 0; t < customer_order.size(); ++t) {
    chr.genes[customer_order[t]] = (static_cast<double>(t) + 0.5) / static_cast<double>(n_cust);
  }
  for (std::size_t s = 0; s < driver_order.size(); ++s) {
    chr.genes[n_cust + driver_order[s]] = (static_cast<double>(s) + 0.5) / static_cast<double>(n_drivers);
  }
  return chr;
}

}  // namespace vrpod
