#include "vrpod/instance.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "vrpod/random.hpp"

namespace vrpod {

namespace {

double grid_round(double d) { return std::round(d * 1e9) / 1e9; }

bool finite_point(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

void check_window(const TimeWindow& w, const std::string& record) {
  if (std::isnan(w.open) || std::isnan(w.close) || !std::isfinite(w.open)) {
    throw ValidationError(record + ": time window bounds must be numbers (open finite)");
  }
  if (w.open < 0.0 || w.close < 0.0) {
    throw ValidationError(record + ": time window bounds must be non-negative");
  }
  if (w.open > w.close) {
    throw ValidationError(record + ": time window open exceeds close");
  }
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_real(std::string_view tok, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected a number, got '" + std::string(tok) + "'");
  }
  return value;
}

int to_int(std::string_view tok, std::size_t line) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
  }
  return value;
}

std::string fmt_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

std::pair<Matrix, Matrix> build_matrices(const Point& depot, const std::vector<Customer>& customers,
                                         const std::vector<OccasionalDriver>& ods) {
  std::vector<Point> points;
  points.reserve(customers.size() + ods.size() + 2);
  points.push_back(depot);
  for (const auto& c : customers) points.push_back(c.location);
  for (const auto& k : ods) points.push_back(k.destination);
  points.push_back(depot);

  const std::size_t n = points.size();
  Matrix cost(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = grid_round(std::hypot(points[i].x - points[j].x, points[i].y - points[j].y));
      cost(i, j) = d;
      cost(j, i) = d;
    }
  }
  Matrix time = cost;
  return {std::move(cost), std::move(time)};
}

Instance make_instance(std::string name, Point depot, std::vector<Customer> customers,
                       CompanyFleet fleet, std::vector<OccasionalDriver> ods) {
  if (!finite_point(depot)) throw ValidationError("DEPOT: coordinates must be finite");
  if (fleet.count < 0) throw ValidationError("FLEET: vehicle count must be >= 0");
  if (fleet.capacity <= 0) throw ValidationError("FLEET: capacity must be > 0");
  check_window(fleet.depot_window, "FLEET");

  std::sort(customers.begin(), customers.end(),
            [](const Customer& a, const Customer& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < customers.size(); ++i) {
    const auto& c = customers[i];
    const std::string record = "CUST " + std::to_string(c.id);
    if (i > 0 && customers[i - 1].id == c.id) throw ValidationError(record + ": duplicate id");
    if (c.id != static_cast<int>(i) + 1) throw ValidationError(record + ": ids must be contiguous from 1");
    if (!finite_point(c.location)) throw ValidationError(record + ": coordinates must be finite");
    if (c.demand < 0) throw ValidationError(record + ": demand must be >= 0");
    if (!(c.service_time >= 0.0) || !std::isfinite(c.service_time)) {
      throw ValidationError(record + ": service time must be finite and >= 0");
    }
    check_window(c.window, record);
  }

  std::sort(ods.begin(), ods.end(),
            [](const OccasionalDriver& a, const OccasionalDriver& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < ods.size(); ++i) {
    const auto& k = ods[i];
    const std::string record = "OD " + std::to_string(k.id);
    if (i > 0 && ods[i - 1].id == k.id) throw ValidationError(record + ": duplicate id");
    if (k.id != static_cast<int>(i) + 1) throw ValidationError(record + ": ids must be contiguous from 1");
    if (!finite_point(k.destination)) throw ValidationError(record + ": coordinates must be finite");
    if (k.capacity <= 0) throw ValidationError(record + ": capacity must be > 0");
    check_window(k.window, record);
  }

  Instance inst;
  inst.name = std::move(name);
  inst.depot = depot;
  inst.customers = std::move(customers);
  inst.fleet = fleet;
  inst.ods = std::move(ods);
  std::tie(inst.cost, inst.time) = build_matrices(inst.depot, inst.customers, inst.ods);
  return inst;
}

Instance parse_instance(std::string_view text) {
  enum class Stage { Name, Fleet, Depot, Body };
  Stage stage = Stage::Name;
  bool seen_od = false;

  std::string name;
  CompanyFleet fleet;
  Point depot;
  std::vector<Customer> customers;
  std::vector<OccasionalDriver> ods;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (eol == text.size()) break;
      continue;
    }
    const auto tokens = tokenize(line);
    const std::string_view key = tokens.front();
    auto expect_fields = [&](std::size_t n) {
      if (tokens.size() != n + 1) {
        throw ParseError(line_no, std::string(key) + " expects " + std::to_string(n) + " fields, got " +
                                      std::to_string(tokens.size() - 1));
      }
    };

    switch (stage) {
      case Stage::Name:
        if (key != "NAME") throw ParseError(line_no, "expected NAME record");
        name = std::string(trim(line.substr(4)));
        if (name.empty()) throw ParseError(line_no, "NAME is empty");
        stage = Stage::Fleet;
        break;
      case Stage::Fleet:
        if (key != "FLEET") throw ParseError(line_no, "expected FLEET record");
        expect_fields(4);
        fleet.count = to_int(tokens[1], line_no);
        fleet.capacity = to_int(tokens[2], line_no);
        fleet.depot_window = {to_real(tokens[3], line_no), to_real(tokens[4], line_no)};
        stage = Stage::Depot;
        break;
      case Stage::Depot:
        if (key != "DEPOT") throw ParseError(line_no, "expected DEPOT record");
        expect_fields(2);
        depot = {to_real(tokens[1], line_no), to_real(tokens[2], line_no)};
        stage = Stage::Body;
        break;
      case Stage::Body:
        if (key == "CUST") {
          if (seen_od) throw ParseError(line_no, "CUST records must precede OD records");
          expect_fields(7);
          Customer c;
          c.id = to_int(tokens[1], line_no);
          c.location = {to_real(tokens[2], line_no), to_real(tokens[3], line_no)};
          c.demand = to_int(tokens[4], line_no);
          c.window = {to_real(tokens[5], line_no), to_real(tokens[6], line_no)};
          c.service_time = to_real(tokens[7], line_no);
          for (const auto& other : customers) {
            if (other.id == c.id) throw ParseError(line_no, "duplicate customer id " + std::to_string(c.id));
          }
          customers.push_back(c);
        } else if (key == "OD") {
          seen_od = true;
          expect_fields(6);
          OccasionalDriver k;
          k.id = to_int(tokens[1], line_no);
          k.destination = {to_real(tokens[2], line_no), to_real(tokens[3], line_no)};
          k.capacity = to_int(tokens[4], line_no);
          k.window = {to_real(tokens[5], line_no), to_real(tokens[6], line_no)};
          for (const auto& other : ods) {
            if (other.id == k.id) throw ParseError(line_no, "duplicate OD id " + std::to_string(k.id));
          }
          ods.push_back(k);
        } else {
          throw ParseError(line_no, "unknown record '" + std::string(key) + "'");
        }
        break;
    }
    if (eol == text.size()) break;
  }
  if (stage != Stage::Body) throw ParseError(line_no, "missing NAME, FLEET or DEPOT record");
  return make_instance(std::move(name), depot, std::move(customers), fleet, std::move(ods));
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "NAME " << inst.name << '\n';
  out << "FLEET " << inst.fleet.count << ' ' << inst.fleet.capacity << ' '
      << fmt_real(inst.fleet.depot_window.open) << ' ' << fmt_real(inst.fleet.depot_window.close) << '\n';
  out << "DEPOT " << fmt_real(inst.depot.x) << ' ' << fmt_real(inst.depot.y) << '\n';
  for (const auto& c : inst.customers) {
    out << "CUST " << c.id << ' ' << fmt_real(c.location.x) << ' ' << fmt_real(c.location.y) << ' '
        << c.demand << ' ' << fmt_real(c.window.open) << ' ' << fmt_real(c.window.close) << ' '
        << fmt_real(c.service_time) << '\n';
  }
  for (const auto& k : inst.ods) {
    out << "OD " << k.id << ' ' << fmt_real(k.destination.x) << ' ' << fmt_real(k.destination.y) << ' '
        << k.capacity << ' ' << fmt_real(k.window.open) << ' ' << fmt_real(k.window.close) << '\n';
  }
  return out.str();
}

std::string_view to_string(NetworkType type) {
  switch (type) {
    case NetworkType::Clustered: return "clustered";
    case NetworkType::Random: return "random";
    case NetworkType::Mixed: return "mixed";
  }
  return "random";
}

NetworkType network_type_from_string(std::string_view text) {
  if (text == "clustered" || text == "C") return NetworkType::Clustered;
  if (text == "random" || text == "R") return NetworkType::Random;
  if (text == "mixed" || text == "RC") return NetworkType::Mixed;
  throw std::invalid_argument("unknown network type '" + std::string(text) + "'");
}

namespace {

constexpr std::array<SizeClass, 6> kSizeTable{{
    {5, 4, 40, 3, 3, 80, 10, 25},
    {10, 1, 40, 3, 3, 80, 10, 30},
    {15, 1, 50, 3, 5, 80, 15, 35},
    {25, 2, 40, 5, 10, 100, 20, 40},
    {50, 1, 40, 8, 15, 200, 20, 40},
    {100, 1, 50, 10, 30, 400, 20, 40},
}};

constexpr double kSide = 100.0;

Point random_point(Rng& rng) { return {rng.uniform(0.0, kSide), rng.uniform(0.0, kSide)}; }

Point clustered_point(Rng& rng, const std::vector<Point>& centers) {
  const auto& c = centers[rng.below(centers.size())];
  auto clamp = [](double v) { return std::clamp(v, 0.0, kSide); };
  return {clamp(c.x + 8.0 * rng.normal()), clamp(c.y + 8.0 * rng.normal())};
}

}  // namespace

const SizeClass& size_class_for(int n_customers) {
  const SizeClass* best = &kSizeTable.front();
  for (const auto& row : kSizeTable) {
    if (std::abs(row.customers - n_customers) < std::abs(best->customers - n_customers)) best = &row;
  }
  return *best;
}

Instance generate_instance(int n_customers, NetworkType type, std::uint64_t seed,
                           const GeneratorOptions& options) {
  if (n_customers <= 0) throw std::invalid_argument("n_customers must be positive");
  const SizeClass& row = size_class_for(n_customers);
  const int n_company = options.company_drivers.value_or(row.company_drivers);
  const int n_ods = options.occasional_drivers.value_or(row.occasional_drivers);
  if (n_company < 0 || n_ods < 0) throw std::invalid_argument("driver counts must be >= 0");
  if (n_company + n_ods == 0) throw std::invalid_argument("at least one driver is required");

  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(type) + 1));
  const Point depot{kSide / 2, kSide / 2};

  std::vector<Point> centers(static_cast<std::size_t>(rng.between(3, 5)));
  for (auto& c : centers) c = {rng.uniform(15.0, 85.0), rng.uniform(15.0, 85.0)};

  std::vector<Customer> customers(static_cast<std::size_t>(n_customers));
  const int clustered_count = type == NetworkType::Clustered ? n_customers
                              : type == NetworkType::Mixed   ? n_customers / 2
                                                             : 0;
  for (int i = 0; i < n_customers; ++i) {
    auto& c = customers[static_cast<std::size_t>(i)];
    c.id = i + 1;
    c.location = i < clustered_count ? clustered_point(rng, centers) : random_point(rng);
  }

  std::vector<OccasionalDriver> ods(static_cast<std::size_t>(n_ods));
  for (int k = 0; k < n_ods; ++k) {
    auto& od = ods[static_cast<std::size_t>(k)];
    od.id = k + 1;
    od.destination = random_point(rng);
    od.capacity = static_cast<int>(rng.between(row.od_capacity_lo, row.od_capacity_hi));
  }

  // Sweep order around the depot drives the constructed plan.
  std::vector<std::size_t> sweep(customers.size());
  std::iota(sweep.begin(), sweep.end(), 0);
  std::stable_sort(sweep.begin(), sweep.end(), [&](std::size_t a, std::size_t b) {
    const auto angle = [&](std::size_t i) {
      return std::atan2(customers[i].location.y - depot.y, customers[i].location.x - depot.x);
    };
    return angle(a) < angle(b);
  });

  // First-fit decreasing over company vehicles, then ODs; each route visits
  // its customers in sweep order. Demands are redrawn until the plan fits.
  std::vector<std::size_t> sweep_rank(customers.size());
  for (std::size_t r = 0; r < sweep.size(); ++r) sweep_rank[sweep[r]] = r;
  struct PlannedRoute {
    int driver;  // < n_company: company, else OD index + n_company
    std::vector<std::size_t> visits;
  };
  std::vector<PlannedRoute> plan;
  for (int attempt = 0;; ++attempt) {
    for (auto& c : customers) c.demand = static_cast<int>(rng.between(row.demand_lo, row.demand_hi));
    const int n_drivers = n_company + n_ods;
    std::vector<int> room(static_cast<std::size_t>(n_drivers));
    for (int d = 0; d < n_drivers; ++d) {
      room[static_cast<std::size_t>(d)] =
          d < n_company ? row.company_capacity : ods[static_cast<std::size_t>(d - n_company)].capacity;
    }
    std::vector<std::size_t> by_demand = sweep;
    std::stable_sort(by_demand.begin(), by_demand.end(),
                     [&](std::size_t a, std::size_t b) { return customers[a].demand > customers[b].demand; });
    std::vector<std::vector<std::size_t>> assigned(static_cast<std::size_t>(n_drivers));
    bool ok = true;
    for (const std::size_t c : by_demand) {
      const int q = customers[c].demand;
      auto slot = std::find_if(room.begin(), room.end(), [&](int r) { return r >= q; });
      if (slot == room.end()) {
        ok = false;
        break;
      }
      *slot -= q;
      assigned[static_cast<std::size_t>(slot - room.begin())].push_back(c);
    }
    if (ok) {
      plan.clear();
      for (int d = 0; d < n_drivers; ++d) {
        auto& visits = assigned[static_cast<std::size_t>(d)];
        if (visits.empty()) continue;
        std::sort(visits.begin(), visits.end(), [&](std::size_t a, std::size_t b) { return sweep_rank[a] < sweep_rank[b]; });
        plan.push_back({d, std::move(visits)});
      }
      break;
    }
    if (attempt >= 1000) throw std::runtime_error("generator could not pack demands into the fleet");
  }

  // Lay time windows around the plan's service times.
  auto dist = [](const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); };
  double latest_company_return = 0.0;
  for (auto& od : ods) {
    const double e = rng.uniform(0.0, 150.0);
    od.window = {e, e + dist(depot, od.destination) + rng.uniform(30.0, 120.0)};
  }
  for (const auto& route : plan) {
    const bool is_od = route.driver >= n_company;
    OccasionalDriver* od = is_od ? &ods[static_cast<std::size_t>(route.driver - n_company)] : nullptr;
    double clock = is_od ? od->window.open : 0.0;
    Point at = depot;
    for (const std::size_t c : route.visits) {
      clock += dist(at, customers[c].location);
      at = customers[c].location;
      const double lo = std::max(0.0, clock - rng.uniform(20.0, 80.0));
      customers[c].window = {std::floor(lo), std::ceil(clock + rng.uniform(20.0, 80.0))};
    }
    if (is_od) {
      const double arrival = clock + dist(at, od->destination);
      od->window.close = std::max(od->window.close, std::ceil(arrival + rng.uniform(0.0, 60.0)));
    } else {
      latest_company_return = std::max(latest_company_return, clock + dist(at, depot));
    }
  }

  CompanyFleet fleet;
  fleet.count = n_company;
  fleet.capacity = row.company_capacity;
  fleet.depot_window = {0.0, std::max(1000.0, std::ceil(latest_company_return + 10.0))};

  std::string name = std::string(type == NetworkType::Clustered ? "C" : type == NetworkType::Random ? "R" : "RC") +
                     "-n" + std::to_string(n_customers) + "-s" + std::to_string(seed);
  return make_instance(std::move(name), depot, std::move(customers), fleet, std::move(ods));
}

}  // namespace vrpod
