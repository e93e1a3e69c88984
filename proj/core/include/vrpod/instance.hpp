#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vrpod {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Raised for malformed instance text. what() carries the line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised when well-formed data violates a domain invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct TimeWindow {
  double open = 0.0;
  double close = kInfinity;
  bool contains(double t) const noexcept { return t >= open && t <= close; }
  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

struct Customer {
  int id = 0;  // 1-based, as in the file
  Point location;
  int demand = 0;
  TimeWindow window;
  double service_time = 0.0;
  friend bool operator==(const Customer&, const Customer&) = default;
};

struct CompanyFleet {
  int count = 0;
  int capacity = 1;
  TimeWindow depot_window;
  friend bool operator==(const CompanyFleet&, const CompanyFleet&) = default;
};

struct OccasionalDriver {
  int id = 0;  // 1-based
  Point destination;
  int capacity = 1;
  TimeWindow window;
  friend bool operator==(const OccasionalDriver&, const OccasionalDriver&) = default;
};

/// Dense square matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// A VRPODTW instance.
///
/// Node numbering over N = C u V u {o, b}:
///   0                      depot origin o
///   1 .. |C|               customers, in id order
///   |C|+1 .. |C|+|K|       occasional-driver destinations v_k
///   |C|+|K|+1              company destination b (co-located with o)
struct Instance {
  std::string name;
  Point depot;
  std::vector<Customer> customers;
  CompanyFleet fleet;
  std::vector<OccasionalDriver> ods;
  Matrix cost;
  Matrix time;

  std::size_t num_customers() const noexcept { return customers.size(); }
  std::size_t num_company() const noexcept { return static_cast<std::size_t>(fleet.count); }
  std::size_t num_ods() const noexcept { return ods.size(); }
  std::size_t num_drivers() const noexcept { return num_company() + num_ods(); }
  std::size_t num_nodes() const noexcept { return customers.size() + ods.size() + 2; }
  /// Chromosome length |C| + |D| + |K|.
  std::size_t chromosome_length() const noexcept { return num_customers() + num_drivers(); }

  static constexpr std::size_t origin_node() noexcept { return 0; }
  std::size_t customer_node(std::size_t c) const noexcept { return 1 + c; }
  std::size_t od_node(std::size_t k) const noexcept { return 1 + customers.size() + k; }
  std::size_t end_node() const noexcept { return customers.size() + ods.size() + 1; }

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Euclidean cost and time matrices over the node set, rounded to a 1e-9 grid.
/// Both matrices are identical; o and b share the depot location.
std::pair<Matrix, Matrix> build_matrices(const Point& depot, const std::vector<Customer>& customers,
                                         const std::vector<OccasionalDriver>& ods);

/// Checks every invariant and (re)builds the matrices. Throws ValidationError.
Instance make_instance(std::string name, Point depot, std::vector<Customer> customers,
                       CompanyFleet fleet, std::vector<OccasionalDriver> ods);

/// Parses the line-oriented instance format (NAME / FLEET / DEPOT / CUST / OD).
Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);

/// Writes the instance in the format read by parse_instance. Numbers use the
/// shortest representation that round-trips exactly.
std::string serialize_instance(const Instance& instance);

enum class NetworkType { Clustered, Random, Mixed };

std::string_view to_string(NetworkType type);
NetworkType network_type_from_string(std::string_view text);

/// One row of the benchmark size table.
struct SizeClass {
  int customers;
  int demand_lo, demand_hi;
  int company_drivers;
  int occasional_drivers;
  int company_capacity;
  int od_capacity_lo, od_capacity_hi;
};

/// The size row whose customer count is nearest to n (ties resolve to the smaller row).
const SizeClass& size_class_for(int n_customers);

struct GeneratorOptions {
  std::optional<int> company_drivers;     // overrides the size table
  std::optional<int> occasional_drivers;  // overrides the size table
};

/// Generates a synthetic instance. Deterministic for a fixed seed, and always
/// admits a feasible solution: windows are laid around a constructed plan.
Instance generate_instance(int n_customers, NetworkType type, std::uint64_t seed,
                           const GeneratorOptions& options = {});

}  // namespace vrpod
