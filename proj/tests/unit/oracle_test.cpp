#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "fixtures.hpp"
#include "vrpod/oracle.hpp"

namespace vrpod {
namespace {

TEST(ExhaustiveSolve, EmptyInstance) {
  const auto inst = make_instance("e", {0, 0}, {}, testing::fleet(1), {});
  const auto res = exhaustive_solve(inst, 0.6);
  EXPECT_EQ(res.status, OracleStatus::Optimal);
  EXPECT_EQ(res.cost, 0.0);
  EXPECT_TRUE(res.solution.routes.empty());
}

TEST(ExhaustiveSolve, SingleCompanyRoute) {
  const auto res = exhaustive_solve(testing::one_customer_company(), 0.6);
  ASSERT_EQ(res.status, OracleStatus::Optimal);
  EXPECT_NEAR(res.cost, 10.0, 1e-12);
}

TEST(ExhaustiveSolve, PrefersOccasionalDriver) {
  const auto inst = testing::one_customer_with_od();
  const auto res = exhaustive_solve(inst, 0.6);
  ASSERT_EQ(res.status, OracleStatus::Optimal);
  EXPECT_NEAR(res.cost, -4.0, 1e-12);
  ASSERT_EQ(res.solution.routes.size(), 1u);
  EXPECT_EQ(res.solution.routes[0].driver.kind, DriverKind::Occasional);
}

TEST(ExhaustiveSolve, InfeasibleWhenCapacityTooSmall) {
  const auto inst = make_instance("tight", {0, 0}, {testing::customer(1, 1, 1, 20)}, testing::fleet(1, 10), {});
  EXPECT_EQ(exhaustive_solve(inst, 0.6).status, OracleStatus::Infeasible);
}

TEST(ExhaustiveSolve, BudgetExceededIsReported) {
  const auto inst = testing::tiny_generated(7, 1);
  const auto res = exhaustive_solve(inst, 0.6, 10);
  EXPECT_EQ(res.status, OracleStatus::BudgetExceeded);
}

TEST(ExhaustiveSolve, ResultIsFeasibleAndSelfConsistent) {
  for (int n = 2; n <= 7; ++n) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const auto inst = testing::tiny_generated(n, seed, NetworkType::Mixed);
      const auto res = exhaustive_solve(inst, 0.6);
      ASSERT_EQ(res.status, OracleStatus::Optimal);
      EXPECT_TRUE(check_feasible(res.solution, inst).feasible());
      EXPECT_NEAR(res.cost, evaluate_objective(res.solution, inst, 0.6), 1e-9);
    }
  }
}

TEST(ExhaustiveSolve, MatchesBruteForceOnThreeCustomers) {
  // Enumerate every assignment of three customers to four drivers and every
  // visiting order.
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto inst = testing::tiny_generated(3, seed);
    double best = kInfinity;
    for (int code = 0; code < 4 * 4 * 4; ++code) {
      std::vector<std::vector<std::size_t>> groups(4);
      for (std::size_t c = 0, rest = static_cast<std::size_t>(code); c < 3; ++c, rest /= 4) {
        groups[rest % 4].push_back(c);
      }
      double total = 0.0;
      bool ok = true;
      for (std::size_t d = 0; d < 4 && ok; ++d) {
        auto& g = groups[d];
        if (g.empty()) continue;
        const DriverRef driver = d < 2 ? DriverRef{DriverKind::Company, d} : DriverRef{DriverKind::Occasional, d - 2};
        std::sort(g.begin(), g.end());
        double route_best = kInfinity;
        do {
          if (route_schedule(inst, driver, g)) route_best = std::min(route_best, route_cost(inst, driver, g, 0.6));
        } while (std::next_permutation(g.begin(), g.end()));
        ok = route_best < kInfinity;
        total += route_best;
      }
      if (ok) best = std::min(best, total);
    }
    const auto res = exhaustive_solve(inst, 0.6);
    ASSERT_EQ(res.status, OracleStatus::Optimal);
    EXPECT_NEAR(res.cost, best, 1e-9) << "seed " << seed;
  }
}

std::vector<std::string> row_names(const std::string& lp) {
  std::vector<std::string> names;
  std::istringstream in(lp);
  std::string line;
  bool rows = false;
  const std::regex label(R"(^ ([A-Za-z_][A-Za-z0-9_]*):)");
  while (std::getline(in, line)) {
    if (line == "Subject To") {
      rows = true;
      continue;
    }
    if (line == "Bounds") break;
    std::smatch m;
    if (rows && std::regex_search(line, m, label)) names.push_back(m[1]);
  }
  return names;
}

TEST(ExportMilp, HandCountOneCustomerOneDriver) {
  const auto inst = make_instance("hand", {0, 0}, {testing::customer(1, 3, 4, 1, {0, 100})}, testing::fleet(1), {});
  const std::string lp = export_milp(inst, 0.6);
  // Arcs x_0_1 and x_1_2. Rows: flow at customer 1, depot balance, one load
  // row per arc, no customer-to-customer time rows, fleet size, assignment
  // of customer 1, and the depot-window rows for departure and return.
  const std::vector<std::string> expected{"flow_1", "depot_balance", "load_0_1",     "load_1_2",
                                          "fleet",  "assign_1",      "ext_depart_1", "ext_return_1"};
  EXPECT_EQ(row_names(lp), expected);
  const auto obj_begin = lp.find(" obj:");
  const auto obj_end = lp.find("Subject To");
  ASSERT_NE(obj_begin, std::string::npos);
  const std::string objective = lp.substr(obj_begin, obj_end - obj_begin);
  EXPECT_NE(objective.find("5 x_0_1"), std::string::npos);
  EXPECT_NE(objective.find("5 x_1_2"), std::string::npos);
  EXPECT_EQ(objective.find("r_"), std::string::npos);
  EXPECT_NE(lp.find("Binary"), std::string::npos);
  EXPECT_NE(lp.find("big_M (time) = 1005,"), std::string::npos);
}

TEST(ExportMilp, ByteIdenticalReExport) {
  const auto inst = testing::tiny_generated(5, 3);
  EXPECT_EQ(export_milp(inst, 0.6), export_milp(inst, 0.6));
}

TEST(ExportMilp, UnboundedDeadlineNeedsExplicitBigM) {
  const auto inst = make_instance("open", {0, 0}, {testing::customer(1, 3, 4)}, testing::fleet(1, 10, {0, kInfinity}),
                                  {});
  EXPECT_THROW(export_milp(inst, 0.6), std::invalid_argument);
  EXPECT_NO_THROW(export_milp(inst, 0.6, 1000.0));
}

TEST(ExportMilp, OccasionalDriverTermsPresent) {
  const std::string lp = export_milp(testing::one_customer_with_od(), 0.6, 100.0);
  EXPECT_NE(lp.find("r_0_0_1"), std::string::npos);
  EXPECT_NE(lp.find("od_count"), std::string::npos);
}

}  // namespace
}  // namespace vrpod
