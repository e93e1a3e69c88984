#include "vrpod/oracle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "vrpod/decoder.hpp"

namespace vrpod {

std::string_view to_string(OracleStatus status) {
  switch (status) {
    case OracleStatus::Optimal: return "optimal";
    case OracleStatus::Infeasible: return "infeasible";
    case OracleStatus::BudgetExceeded: return "budget_exceeded";
  }
  return "infeasible";
}

namespace {

class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, double rho, std::size_t budget)
      : inst_(inst), rho_(rho), budget_(budget), n_(inst.num_customers()) {
    for (std::size_t k = 0; k < inst.num_ods(); ++k) order_.push_back({DriverKind::Occasional, k});
    for (std::size_t d = 0; d < inst.num_company(); ++d) order_.push_back({DriverKind::Company, d});
    routes_.resize(order_.size());
    served_.assign(n_, false);

    min_in_.assign(n_, kInfinity);
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t node = inst.customer_node(j);
      min_in_[j] = inst.cost(Instance::origin_node(), node);
      for (std::size_t i = 0; i < n_; ++i) {
        if (i != j) min_in_[j] = std::min(min_in_[j], inst.cost(inst.customer_node(i), node));
      }
    }
    // Suffix sums of the direct-trip refunds still obtainable from driver p on.
    refund_from_.assign(order_.size() + 1, 0.0);
    for (std::size_t p = order_.size(); p-- > 0;) {
      refund_from_[p] = refund_from_[p + 1];
      if (order_[p].kind == DriverKind::Occasional) {
        refund_from_[p] += inst.cost(Instance::origin_node(), destination_node(inst, order_[p]));
      }
    }
  }

  OracleResult run() {
    OracleResult out;
    if (n_ == 0) {
      out.status = OracleStatus::Optimal;
      out.cost = 0.0;
      return out;
    }
    if (!order_.empty()) {
      DriverState s = DriverState::start(inst_, order_[0]);
      dfs(0, s, 0.0, n_, kNone);
    }
    out.nodes = nodes_;
    if (best_cost_ < kInfinity) {
      out.cost = best_cost_;
      out.solution = best_;
      refresh(out.solution, inst_, rho_);
    }
    if (aborted_) out.status = OracleStatus::BudgetExceeded;
    else out.status = best_cost_ < kInfinity ? OracleStatus::Optimal : OracleStatus::Infeasible;
    return out;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  /// Final arc of the current route (the refund is already in `partial`).
  double closing_arc(const DriverState& s) const {
    if (s.tail == Instance::origin_node()) return 0.0;
    return inst_.cost(s.tail, destination_node(inst_, s.driver)) * compensation(s.driver, rho_);
  }

  double lower_bound(std::size_t p, const DriverState& s, double partial, std::size_t left) const {
    if (left == 0) return partial + closing_arc(s);
    const bool od_left = s.driver.kind == DriverKind::Occasional;
    const double factor = od_left ? std::min(rho_, 1.0) : 1.0;
    double lb = partial;
    for (std::size_t j = 0; j < n_; ++j) {
      if (!served_[j]) lb += factor * min_in_[j];
    }
    // Refund of the current driver is already in `partial` once it has left the depot.
    lb -= s.tail == Instance::origin_node() ? refund_from_[p] : refund_from_[p + 1];
    return lb;
  }

  void record(double total) {
    if (!(total < best_cost_ - 1e-12)) return;
    best_cost_ = total;
    best_.routes.clear();
    for (std::size_t p = 0; p < order_.size(); ++p) {
      if (!routes_[p].empty()) best_.routes.push_back(Route{order_[p], routes_[p], {}, 0});
    }
    std::sort(best_.routes.begin(), best_.routes.end(),
              [](const Route& a, const Route& b) { return a.driver < b.driver; });
  }

  /// `partial` holds closed routes plus the arcs of the current route, with
  /// the refund of an OD counted once its route is non-empty.
  void dfs(std::size_t p, DriverState& s, double partial, std::size_t left, std::size_t prev_company_first) {
    if (aborted_) return;
    if (++nodes_ > budget_) {
      aborted_ = true;
      return;
    }
    if (left == 0) {
      record(partial + closing_arc(s));
      return;
    }
    if (lower_bound(p, s, partial, left) >= best_cost_ - 1e-12) return;

    const bool is_company = s.driver.kind == DriverKind::Company;
    const bool empty = s.tail == Instance::origin_node();
    const double comp = compensation(s.driver, rho_);

    for (std::size_t c = 0; c < n_; ++c) {
      if (served_[c]) continue;
      if (is_company && empty && prev_company_first != kNone && c <= prev_company_first) continue;
      if (!capacity_check(s, inst_, c) || !time_check(s, inst_, c)) continue;

      const DriverState saved = s;
      const std::size_t node = inst_.customer_node(c);
      double add = inst_.cost(s.tail, node) * comp;
      if (empty && s.driver.kind == DriverKind::Occasional) {
        add -= inst_.cost(Instance::origin_node(), destination_node(inst_, s.driver));
      }
      const double a = arrival_time(s, inst_, c);
      s.clock = a + inst_.customers[c].service_time;
      s.tail = node;
      s.remaining_capacity -= inst_.customers[c].demand;
      served_[c] = true;
      routes_[p].push_back(c);

      dfs(p, s, partial + add, left - 1, prev_company_first);

      routes_[p].pop_back();
      served_[c] = false;
      s = saved;
      if (aborted_) return;
    }

    // Close the current route and hand over to the next driver. An empty
    // company route ends the search: later company drivers are interchangeable.
    if (is_company && empty) return;
    if (p + 1 >= order_.size()) return;
    std::size_t next_prev = prev_company_first;
    if (is_company) next_prev = routes_[p].front();
    const double closed = partial + closing_arc(s);
    DriverState next = DriverState::start(inst_, order_[p + 1]);
    dfs(p + 1, next, closed, left, next_prev);
  }

  const Instance& inst_;
  double rho_;
  std::size_t budget_;
  std::size_t n_;
  std::vector<DriverRef> order_;
  std::vector<std::vector<std::size_t>> routes_;
  std::vector<bool> served_;
  std::vector<double> min_in_;
  std::vector<double> refund_from_;
  std::size_t nodes_ = 0;
  bool aborted_ = false;
  double best_cost_ = kInfinity;
  Solution best_;
};

}  // namespace

OracleResult exhaustive_solve(const Instance& inst, double rho, std::size_t node_budget) {
  return BranchAndBound(inst, rho, node_budget).run();
}

// ---------------------------------------------------------------------------
// LP export

namespace {

std::string number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::to_string(v);
}

/// Linear expression accumulated as (coefficient, variable) terms.
struct Expr {
  std::vector<std::pair<double, std::string>> terms;
  Expr& add(double c, std::string var) {
    terms.emplace_back(c, std::move(var));
    return *this;
  }
};

class LpWriter {
 public:
  void comment(std::string_view text) { out_ << "\\ " << text << '\n'; }
  void raw(std::string_view text) { out_ << text; }

  void expression(const Expr& e) {
    std::size_t width = 0;
    bool first = true;
    for (const auto& [c, var] : e.terms) {
      std::string term;
      if (first) term = (c < 0 ? "- " : "") + number(std::fabs(c)) + " " + var;
      else term = (c < 0 ? " - " : " + ") + number(std::fabs(c)) + " " + var;
      if (width + term.size() > 78) {
        out_ << "\n   ";
        width = 3;
      }
      out_ << term;
      width += term.size();
      first = false;
    }
    if (first) out_ << "0 " << placeholder_;
  }

  void row(const std::string& name, const Expr& e, std::string_view sense, double rhs) {
    out_ << ' ' << name << ": ";
    expression(e);
    out_ << ' ' << sense << ' ' << number(rhs) << '\n';
    ++rows_;
  }

  void set_placeholder(std::string var) { placeholder_ = std::move(var); }
  std::size_t rows() const { return rows_; }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  std::size_t rows_ = 0;
  std::string placeholder_;
};

std::string name(std::string_view prefix, std::initializer_list<std::size_t> idx) {
  std::string s(prefix);
  for (const auto i : idx) s += "_" + std::to_string(i);
  return s;
}

}  // namespace

std::string export_milp(const Instance& inst, double rho, std::optional<double> big_m) {
  const std::size_t n = inst.num_customers();
  const std::size_t K = inst.num_ods();
  const std::size_t o = Instance::origin_node();
  const std::size_t b = inst.end_node();
  const double Q = inst.fleet.capacity;
  const auto& depot = inst.fleet.depot_window;

  std::vector<std::size_t> C(n);
  for (std::size_t c = 0; c < n; ++c) C[c] = inst.customer_node(c);
  auto q = [&](std::size_t node) -> double {
    return node >= 1 && node <= n ? inst.customers[node - 1].demand : 0.0;
  };
  auto svc = [&](std::size_t node) -> double {
    return node >= 1 && node <= n ? inst.customers[node - 1].service_time : 0.0;
  };

  // Time horizon: every service ends before some driver deadline.
  double horizon = depot.close;
  for (const auto& od : inst.ods) horizon = std::max(horizon, od.window.close);
  double M = 0.0;
  if (big_m) {
    M = *big_m;
  } else {
    if (!std::isfinite(horizon)) {
      throw std::invalid_argument("export_milp: unbounded driver deadline; pass an explicit big-M");
    }
    double max_l = depot.close;
    for (const auto& c : inst.customers) {
      if (std::isfinite(c.window.close)) max_l = std::max(max_l, c.window.close);
    }
    for (const auto& od : inst.ods) max_l = std::max(max_l, od.window.close);
    double max_t = 0.0;
    double max_svc = 0.0;
    for (std::size_t i = 0; i < inst.num_nodes(); ++i) {
      for (std::size_t j = 0; j < inst.num_nodes(); ++j) max_t = std::max(max_t, inst.time(i, j));
    }
    for (const auto& c : inst.customers) max_svc = std::max(max_svc, c.service_time);
    M = max_l + max_t + max_svc;
  }
  const double bound = std::isfinite(horizon) ? horizon : M;

  auto x = [&](std::size_t i, std::size_t j) { return name("x", {i, j}); };
  auto r = [&](std::size_t k, std::size_t i, std::size_t j) { return name("r", {k, i, j}); };
  auto vk = [&](std::size_t k) { return inst.od_node(k); };

  // Arc sets.
  std::vector<std::pair<std::size_t, std::size_t>> xarcs;
  for (std::size_t i : [&] { std::vector<std::size_t> v{o}; v.insert(v.end(), C.begin(), C.end()); return v; }()) {
    for (std::size_t j : C) {
      if (i != j) xarcs.emplace_back(i, j);
    }
    if (i != o) xarcs.emplace_back(i, b);
  }
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> rarcs(K);
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<std::size_t> from{o};
    from.insert(from.end(), C.begin(), C.end());
    for (std::size_t i : from) {
      for (std::size_t j : C) {
        if (i != j) rarcs[k].emplace_back(i, j);
      }
      rarcs[k].emplace_back(i, vk(k));
    }
  }

  LpWriter lp;
  lp.comment("VRPODTW model: " + inst.name);
  lp.comment("nodes: 0 = depot origin, 1.." + std::to_string(n) + " = customers, " +
             (K ? std::to_string(n + 1) + ".." + std::to_string(n + K) + " = OD destinations, " : std::string()) +
             std::to_string(b) + " = company destination");
  lp.comment("rho = " + number(rho));
  lp.comment("big_M (time) = " + number(M) + ", big_M (capacity) = vehicle capacity");
  lp.comment("service times enter the time propagation rows; ext rows tie company routes to the depot window");

  lp.raw("Minimize\n obj: ");
  Expr obj;
  for (const auto& [i, j] : xarcs) obj.add(inst.cost(i, j), x(i, j));
  for (std::size_t k = 0; k < K; ++k) {
    const double direct = inst.cost(o, vk(k));
    for (const auto& [i, j] : rarcs[k]) {
      double coef = rho * inst.cost(i, j);
      if (i == o && j != vk(k)) coef -= direct;
      obj.add(coef, r(k, i, j));
    }
  }
  lp.set_placeholder(xarcs.empty() ? "y_0" : x(xarcs.front().first, xarcs.front().second));
  lp.expression(obj);
  lp.raw("\nSubject To\n");

  // Company flow conservation at customers.
  lp.comment("company flow conservation");
  for (std::size_t i : C) {
    Expr e;
    for (std::size_t j : C) if (j != i) e.add(1, x(i, j));
    e.add(1, x(i, b));
    e.add(-1, x(o, i));
    for (std::size_t j : C) if (j != i) e.add(-1, x(j, i));
    lp.row(name("flow", {i}), e, "=", 0);
  }
  lp.comment("company routes leaving the depot equal those reaching the destination");
  {
    Expr e;
    for (std::size_t j : C) e.add(1, x(o, j));
    for (std::size_t j : C) e.add(-1, x(j, b));
    lp.row("depot_balance", e, "=", 0);
  }
  lp.comment("company load propagation");
  for (const auto& [i, j] : xarcs) {
    Expr e;
    e.add(1, name("y", {j})).add(-1, name("y", {i})).add(-(q(j) + Q), x(i, j));
    lp.row(name("load", {i, j}), e, ">=", -Q);
  }
  lp.comment("company arrival times");
  for (std::size_t i : C) {
    for (std::size_t j : C) {
      if (i == j) continue;
      Expr e;
      e.add(1, name("s", {j})).add(-1, name("s", {i})).add(-(inst.time(i, j) + svc(i) + M), x(i, j));
      lp.row(name("time", {i, j}), e, ">=", -M);
    }
  }
  lp.comment("company fleet size");
  {
    Expr e;
    for (std::size_t j : C) e.add(1, x(o, j));
    lp.row("fleet", e, "<=", static_cast<double>(inst.num_company()));
  }

  for (std::size_t k = 0; k < K; ++k) {
    const std::size_t v = vk(k);
    lp.comment("OD " + std::to_string(k) + " flow conservation");
    for (std::size_t i : C) {
      Expr e;
      for (std::size_t j : C) if (j != i) e.add(1, r(k, i, j));
      e.add(1, r(k, i, v));
      e.add(-1, r(k, o, i));
      for (std::size_t j : C) if (j != i) e.add(-1, r(k, j, i));
      lp.row(name("od_flow", {k, i}), e, "=", 0);
    }
    lp.comment("OD " + std::to_string(k) + " departures equal arrivals at its destination");
    {
      Expr e;  // the r_o_v term appears on both sides and cancels
      for (std::size_t j : C) e.add(1, r(k, o, j));
      for (std::size_t j : C) e.add(-1, r(k, j, v));
      lp.row(name("od_balance", {k}), e, "=", 0);
    }
  }
  if (K > 0) {
    lp.comment("OD count");
    Expr e;
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t j : C) e.add(1, r(k, o, j));
      e.add(1, r(k, o, vk(k)));
    }
    lp.row("od_count", e, "<=", static_cast<double>(K));
  }
  for (std::size_t k = 0; k < K; ++k) {
    const std::size_t v = vk(k);
    const auto& od = inst.ods[k];
    const double Qk = od.capacity;
    lp.comment("OD " + std::to_string(k) + " single departure");
    {
      Expr e;
      for (std::size_t j : C) e.add(1, r(k, o, j));
      lp.row(name("od_leave", {k}), e, "<=", 1);
    }
    lp.comment("OD " + std::to_string(k) + " load propagation");
    for (const auto& [i, j] : rarcs[k]) {
      Expr e;
      e.add(1, name("w", {k, j})).add(-1, name("w", {k, i})).add(-(q(i) + Qk), r(k, i, j));
      lp.row(name("od_load", {k, i, j}), e, ">=", -Qk);
    }
    {
      Expr e;
      e.add(1, name("w", {k, o}));
      lp.row(name("od_load_origin", {k}), e, "<=", Qk);
    }
    lp.comment("OD " + std::to_string(k) + " arrival times");
    for (const auto& [i, j] : rarcs[k]) {
      if (i == o) continue;
      Expr e;
      e.add(1, name("f", {k, j})).add(-1, name("f", {k, i})).add(-(inst.time(i, j) + svc(i) + M), r(k, i, j));
      lp.row(name("od_time", {k, i, j}), e, ">=", -M);
    }
    lp.comment("OD " + std::to_string(k) + " departure and windows, active only on visited customers");
    for (std::size_t i : C) {
      Expr visit;
      visit.add(1, name("f", {k, i}));
      for (const auto& [a, bb] : rarcs[k]) {
        if (bb == i) visit.add(-M, r(k, a, bb));
      }
      lp.row(name("od_start", {k, i}), visit, ">=", od.window.open + inst.time(o, i) - M);
    }
    {
      Expr e;
      e.add(1, name("f", {k, v}));
      lp.row(name("od_deadline", {k}), e, "<=", od.window.close);
    }
    for (std::size_t i : C) {
      const auto& w = inst.customers[i - 1].window;
      Expr lo;
      lo.add(1, name("f", {k, i}));
      Expr hi;
      hi.add(1, name("f", {k, i}));
      for (const auto& [a, bb] : rarcs[k]) {
        if (bb != i) continue;
        lo.add(-M, r(k, a, bb));
        hi.add(M, r(k, a, bb));
      }
      lp.row(name("od_open", {k, i}), lo, ">=", w.open - M);
      lp.row(name("od_close", {k, i}), hi, "<=", std::min(w.close, bound) + M);
    }
  }

  lp.comment("each customer served exactly once");
  for (std::size_t i : C) {
    Expr e;
    for (std::size_t j : C) if (j != i) e.add(1, x(i, j));
    e.add(1, x(i, b));
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t j : C) if (j != i) e.add(1, r(k, i, j));
      e.add(1, r(k, i, vk(k)));
    }
    lp.row(name("assign", {i}), e, "=", 1);
  }

  lp.comment("ext: company departure from the depot and return before it closes");
  for (std::size_t j : C) {
    Expr e;
    e.add(1, name("s", {j})).add(-M, x(o, j));
    lp.row(name("ext_depart", {j}), e, ">=", depot.open + inst.time(o, j) - M);
  }
  for (std::size_t i : C) {
    Expr e;
    e.add(1, name("s", {i})).add(M, x(i, b));
    lp.row(name("ext_return", {i}), e, "<=", std::min(depot.close, bound) + M - svc(i) - inst.time(i, b));
  }

  lp.raw("Bounds\n");
  std::ostringstream bounds;
  auto bound_line = [&](double lo, const std::string& var, double hi) {
    bounds << ' ' << number(lo) << " <= " << var << " <= " << number(hi) << '\n';
  };
  for (std::size_t i : C) {
    const auto& w = inst.customers[i - 1].window;
    bound_line(std::max(0.0, w.open), name("s", {i}), std::min(w.close, bound));
  }
  bound_line(0, name("y", {o}), Q);
  for (std::size_t i : C) bound_line(0, name("y", {i}), Q);
  bound_line(0, name("y", {b}), Q);
  for (std::size_t k = 0; k < K; ++k) {
    const double Qk = inst.ods[k].capacity;
    bound_line(0, name("w", {k, o}), Qk);
    for (std::size_t i : C) bound_line(0, name("w", {k, i}), Qk);
    bound_line(0, name("w", {k, vk(k)}), Qk);
    for (std::size_t i : C) bound_line(0, name("f", {k, i}), bound);
    bound_line(0, name("f", {k, vk(k)}), bound);
  }
  lp.raw(bounds.str());

  lp.raw("General\n");
  std::ostringstream gen;
  gen << ' ' << name("y", {o});
  for (std::size_t i : C) gen << ' ' << name("y", {i});
  gen << ' ' << name("y", {b}) << '\n';
  for (std::size_t k = 0; k < K; ++k) {
    gen << ' ' << name("w", {k, o});
    for (std::size_t i : C) gen << ' ' << name("w", {k, i});
    gen << ' ' << name("w", {k, vk(k)}) << '\n';
  }
  lp.raw(gen.str());

  lp.raw("Binary\n");
  std::ostringstream bin;
  for (const auto& [i, j] : xarcs) bin << ' ' << x(i, j) << '\n';
  for (std::size_t k = 0; k < K; ++k) {
    for (const auto& [i, j] : rarcs[k]) bin << ' ' << r(k, i, j) << '\n';
  }
  lp.raw(bin.str());
  lp.raw("End\n");
  return lp.str();
}

}  // namespace vrpod
