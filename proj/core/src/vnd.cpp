#include "vrpod/vnd.hpp"

#include <array>
#include <optional>

namespace vrpod {

namespace {

using Visits = std::vector<std::size_t>;

/// Working copy of a solution restricted to non-empty routes, with cached
/// route costs.
struct Workspace {
  const Instance& inst;
  double rho;
  std::vector<Route> routes;
  std::vector<double> costs;

  Workspace(const Solution& s, const Instance& instance, double r) : inst(instance), rho(r) {
    for (const auto& route : s.routes) {
      if (route.visits.empty()) continue;
      routes.push_back(route);
      costs.push_back(route_cost(inst, route.driver, route.visits, rho));
    }
  }

  /// Cost of a candidate route, or nullopt when infeasible. Empty costs 0.
  std::optional<double> eval(const DriverRef& d, const Visits& v) const {
    if (v.empty()) return 0.0;
    if (!route_schedule(inst, d, v)) return std::nullopt;
    return route_cost(inst, d, v, rho);
  }
};

/// Best move found so far: the routes to overwrite and their new contents.
struct Move {
  double delta = -kCostEpsilon;  // only strictly better moves are recorded
  std::vector<std::pair<std::size_t, Visits>> changes;
  std::optional<Route> added;
  bool found = false;

  void offer(double d, std::vector<std::pair<std::size_t, Visits>> c, std::optional<Route> a = std::nullopt) {
    if (d < delta) {
      delta = d;
      changes = std::move(c);
      added = std::move(a);
      found = true;
    }
  }
};

Solution apply(const Workspace& ws, const Move& move) {
  Solution out;
  std::vector<Route> routes = ws.routes;
  for (const auto& [r, visits] : move.changes) routes[r].visits = visits;
  if (move.added) routes.push_back(*move.added);
  for (auto& r : routes) {
    if (!r.visits.empty()) out.routes.push_back(std::move(r));
  }
  refresh(out, ws.inst, ws.rho);
  return out;
}

Solution finish(const Workspace& ws, const Solution& original, const Move& move) {
  if (!move.found) return original;
  return apply(ws, move);
}

std::optional<std::size_t> first_unused_company(const Workspace& ws) {
  std::vector<bool> used(ws.inst.num_company(), false);
  for (const auto& r : ws.routes) {
    if (r.driver.kind == DriverKind::Company && r.driver.index < used.size()) used[r.driver.index] = true;
  }
  for (std::size_t d = 0; d < used.size(); ++d) {
    if (!used[d]) return d;
  }
  return std::nullopt;
}

Solution new_path_impl(const Solution& s, const Instance& inst, double rho, bool strict) {
  Workspace ws(s, inst, rho);
  const auto unused = first_unused_company(ws);
  if (!unused) return s;
  const DriverRef driver{DriverKind::Company, *unused};

  bool found = false;
  double best_delta = kInfinity;
  std::size_t best_r = 0, best_i = 0;
  for (std::size_t r = 0; r < ws.routes.size(); ++r) {
    const Visits& v = ws.routes[r].visits;
    for (std::size_t i = 0; i < v.size(); ++i) {
      Visits rest = v;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      const auto a = ws.eval(ws.routes[r].driver, rest);
      const auto b = ws.eval(driver, Visits{v[i]});
      if (!a || !b) continue;
      const double delta = *a + *b - ws.costs[r];
      if (delta < best_delta) {
        best_delta = delta;
        best_r = r;
        best_i = i;
        found = true;
      }
    }
  }
  const double threshold = strict ? -kCostEpsilon : 0.0;
  if (!found || !(best_delta < threshold || (!strict && best_delta <= 0.0))) return s;

  Move move;
  move.found = true;
  move.delta = best_delta;
  Visits rest = ws.routes[best_r].visits;
  const std::size_t c = rest[best_i];
  rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best_i));
  move.changes.emplace_back(best_r, std::move(rest));
  move.added = Route{driver, {c}, {}, 0};
  return apply(ws, move);
}

}  // namespace

Solution two_opt(const Solution& s, const Instance& inst, double rho) {
  Workspace ws(s, inst, rho);
  Move move;
  const std::size_t R = ws.routes.size();

  // Intra-route: reverse visits[i..j].
  for (std::size_t r = 0; r < R; ++r) {
    const Visits& v = ws.routes[r].visits;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        Visits cand = v;
        std::reverse(cand.begin() + static_cast<std::ptrdiff_t>(i), cand.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        const auto c = ws.eval(ws.routes[r].driver, cand);
        if (c) move.offer(*c - ws.costs[r], {{r, std::move(cand)}});
      }
    }
  }
  // Inter-route tail exchange (2-opt*): A[0:a] + B[b:], B[0:b] + A[a:].
  for (std::size_t ra = 0; ra < R; ++ra) {
    for (std::size_t rb = ra + 1; rb < R; ++rb) {
      const Visits& A = ws.routes[ra].visits;
      const Visits& B = ws.routes[rb].visits;
      for (std::size_t a = 0; a <= A.size(); ++a) {
        for (std::size_t b = 0; b <= B.size(); ++b) {
          if (a == A.size() && b == B.size()) continue;
          Visits na(A.begin(), A.begin() + static_cast<std::ptrdiff_t>(a));
          na.insert(na.end(), B.begin() + static_cast<std::ptrdiff_t>(b), B.end());
          Visits nb(B.begin(), B.begin() + static_cast<std::ptrdiff_t>(b));
          nb.insert(nb.end(), A.begin() + static_cast<std::ptrdiff_t>(a), A.end());
          const auto ca = ws.eval(ws.routes[ra].driver, na);
          if (!ca) continue;
          const auto cb = ws.eval(ws.routes[rb].driver, nb);
          if (!cb) continue;
          move.offer(*ca + *cb - ws.costs[ra] - ws.costs[rb], {{ra, std::move(na)}, {rb, std::move(nb)}});
        }
      }
    }
  }
  return finish(ws, s, move);
}

Solution move_node(const Solution& s, const Instance& inst, double rho) {
  Workspace ws(s, inst, rho);
  Move move;
  const std::size_t R = ws.routes.size();
  for (std::size_t r = 0; r < R; ++r) {
    const Visits& v = ws.routes[r].visits;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::size_t c = v[i];
      Visits rest = v;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      const auto rest_cost = ws.eval(ws.routes[r].driver, rest);
      for (std::size_t r2 = 0; r2 < R; ++r2) {
        if (r2 == r) {
          for (std::size_t p = 0; p <= rest.size(); ++p) {
            if (p == i) continue;
            Visits cand = rest;
            cand.insert(cand.begin() + static_cast<std::ptrdiff_t>(p), c);
            const auto cc = ws.eval(ws.routes[r].driver, cand);
            if (cc) move.offer(*cc - ws.costs[r], {{r, std::move(cand)}});
          }
          continue;
        }
        if (!rest_cost) continue;
        const Visits& w = ws.routes[r2].visits;
        for (std::size_t p = 0; p <= w.size(); ++p) {
          Visits cand = w;
          cand.insert(cand.begin() + static_cast<std::ptrdiff_t>(p), c);
          const auto cc = ws.eval(ws.routes[r2].driver, cand);
          if (cc) {
            move.offer(*rest_cost + *cc - ws.costs[r] - ws.costs[r2], {{r, rest}, {r2, std::move(cand)}});
          }
        }
      }
    }
  }
  return finish(ws, s, move);
}

Solution swap_inter(const Solution& s, const Instance& inst, double rho) {
  Workspace ws(s, inst, rho);
  Move move;
  const std::size_t R = ws.routes.size();
  for (std::size_t ra = 0; ra < R; ++ra) {
    for (std::size_t rb = ra + 1; rb < R; ++rb) {
      const Visits& A = ws.routes[ra].visits;
      const Visits& B = ws.routes[rb].visits;
      for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t j = 0; j < B.size(); ++j) {
          Visits na = A;
          Visits nb = B;
          std::swap(na[i], nb[j]);
          const auto ca = ws.eval(ws.routes[ra].driver, na);
          if (!ca) continue;
          const auto cb = ws.eval(ws.routes[rb].driver, nb);
          if (!cb) continue;
          move.offer(*ca + *cb - ws.costs[ra] - ws.costs[rb], {{ra, std::move(na)}, {rb, std::move(nb)}});
        }
      }
    }
  }
  return finish(ws, s, move);
}

Solution swap_intra(const Solution& s, const Instance& inst, double rho) {
  Workspace ws(s, inst, rho);
  Move move;
  for (std::size_t r = 0; r < ws.routes.size(); ++r) {
    const Visits& v = ws.routes[r].visits;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        Visits cand = v;
        std::swap(cand[i], cand[j]);
        const auto c = ws.eval(ws.routes[r].driver, cand);
        if (c) move.offer(*c - ws.costs[r], {{r, std::move(cand)}});
      }
    }
  }
  return finish(ws, s, move);
}

Solution new_path(const Solution& s, const Instance& inst, double rho) {
  return new_path_impl(s, inst, rho, false);
}

Solution new_path_best(const Solution& s, const Instance& inst, double rho) {
  return new_path_impl(s, inst, rho, true);
}

Solution vnd(const Solution& s, const Instance& inst, double rho,
             std::optional<std::chrono::steady_clock::time_point> deadline, VndStats* stats) {
  const auto report = check_feasible(s, inst);
  if (!report.feasible()) throw ValidationError("vnd: infeasible start solution: " + report.summary());

  using Operator = Solution (*)(const Solution&, const Instance&, double);
  constexpr std::array<Operator, 6> neighborhoods{two_opt, move_node, swap_inter, swap_intra, new_path, new_path_best};

  Solution current = s;
  refresh(current, inst, rho);
  std::size_t k = 0;
  while (k < neighborhoods.size()) {
    if (deadline && std::chrono::steady_clock::now() >= *deadline) break;
    Solution candidate = neighborhoods[k](current, inst, rho);
    if (stats) ++stats->scans;
    if (candidate.objective < current.objective - kCostEpsilon) {
      current = std::move(candidate);
      if (stats) ++stats->improvements;
      k = 0;
    } else {
      ++k;
    }
  }
  return current;
}

}  // namespace vrpod
