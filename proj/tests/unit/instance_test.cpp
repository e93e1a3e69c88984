#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "vrpod/instance.hpp"
#include "vrpod/oracle.hpp"
#include "vrpod/solution.hpp"

namespace vrpod {
namespace {

using testing::customer;
using testing::fleet;
using testing::od;

TEST(BuildMatrices, PythagoreanDistances) {
  const auto inst = make_instance("m", {0, 0}, {customer(1, 3, 4)}, fleet(1), {od(1, 6, 8)});
  const std::size_t c1 = inst.customer_node(0);
  const std::size_t v1 = inst.od_node(0);
  EXPECT_DOUBLE_EQ(inst.cost(0, c1), 5.0);
  EXPECT_DOUBLE_EQ(inst.cost(c1, v1), 5.0);
  EXPECT_DOUBLE_EQ(inst.cost(0, v1), 10.0);
  EXPECT_DOUBLE_EQ(inst.cost(0, inst.end_node()), 0.0);
  for (std::size_t i = 0; i < inst.num_nodes(); ++i) {
    EXPECT_EQ(inst.cost(i, i), 0.0);
    for (std::size_t j = 0; j < inst.num_nodes(); ++j) {
      EXPECT_EQ(inst.cost(i, j), inst.cost(j, i));
      EXPECT_EQ(inst.cost(i, j), inst.time(i, j));
    }
  }
}

TEST(ParseInstance, EmptyProblemHasTwoNodes) {
  const auto inst = parse_instance("NAME empty\nFLEET 1 10 0 100\nDEPOT 0 0\n");
  EXPECT_EQ(inst.num_customers(), 0u);
  EXPECT_EQ(inst.num_nodes(), 2u);
}

TEST(ParseInstance, CommentsAndBlankLines) {
  const auto inst = parse_instance(
      "# header\n\nNAME x  # trailing\nFLEET 3 80 0 1000\nDEPOT 50 50\n"
      "CUST 1 10 10 4 0 200 0\nCUST 2 20 20 40 5 inf 1.5\nOD 1 90 90 20 0 500\n");
  EXPECT_EQ(inst.name, "x");
  EXPECT_EQ(inst.num_customers(), 2u);
  EXPECT_EQ(inst.fleet.capacity, 80);
  EXPECT_TRUE(std::isinf(inst.customers[1].window.close));
  EXPECT_DOUBLE_EQ(inst.customers[1].service_time, 1.5);
  EXPECT_EQ(inst.num_ods(), 1u);
}

TEST(ParseInstance, DuplicateCustomerIdReportsLine) {
  try {
    parse_instance("NAME d\nFLEET 1 10 0 100\nDEPOT 0 0\nCUST 1 1 1 1 0 10 0\nCUST 1 2 2 1 0 10 0\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
}

TEST(ParseInstance, MalformedNumberReportsLine) {
  try {
    parse_instance("NAME d\nFLEET 1 ten 0 100\nDEPOT 0 0\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ParseInstance, WrongFieldCountRejected) {
  EXPECT_THROW(parse_instance("NAME d\nFLEET 1 10 0 100\nDEPOT 0 0\nCUST 1 1 1 1 0 10\n"), ParseError);
}

TEST(ParseInstance, InvertedWindowIsValidationError) {
  try {
    parse_instance("NAME d\nFLEET 1 10 0 100\nDEPOT 0 0\nCUST 1 1 1 1 50 10 0\n");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("CUST 1"), std::string::npos);
  }
}

TEST(ParseInstance, TableRowFiveCustomers) {
  const auto inst = generate_instance(5, NetworkType::Clustered, 4);
  const auto reparsed = parse_instance(serialize_instance(inst));
  EXPECT_EQ(reparsed.num_customers(), 5u);
  EXPECT_EQ(reparsed.fleet.capacity, 80);
  EXPECT_EQ(reparsed.num_company(), 3u);
  EXPECT_EQ(reparsed.num_ods(), 3u);
}

TEST(SerializeInstance, RoundTripIsIdentical) {
  for (const auto type : {NetworkType::Clustered, NetworkType::Random, NetworkType::Mixed}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto inst = generate_instance(15, type, seed);
      const auto once = parse_instance(serialize_instance(inst));
      EXPECT_EQ(once, inst);
      EXPECT_EQ(serialize_instance(once), serialize_instance(inst));
    }
  }
}

TEST(GenerateInstance, TableRows) {
  const auto n25 = generate_instance(25, NetworkType::Random, 1);
  EXPECT_EQ(n25.num_company(), 5u);
  EXPECT_EQ(n25.num_ods(), 10u);
  EXPECT_EQ(n25.fleet.capacity, 100);
  for (const auto& k : n25.ods) {
    EXPECT_GE(k.capacity, 20);
    EXPECT_LE(k.capacity, 40);
  }
  for (const auto& c : n25.customers) {
    EXPECT_GE(c.demand, 2);
    EXPECT_LE(c.demand, 40);
  }
  const auto n100 = generate_instance(100, NetworkType::Mixed, 1);
  EXPECT_EQ(n100.fleet.capacity, 400);
  EXPECT_EQ(n100.num_ods(), 30u);
}

TEST(GenerateInstance, Deterministic) {
  EXPECT_EQ(generate_instance(25, NetworkType::Clustered, 9), generate_instance(25, NetworkType::Clustered, 9));
  EXPECT_NE(generate_instance(25, NetworkType::Clustered, 9), generate_instance(25, NetworkType::Clustered, 10));
}

TEST(GenerateInstance, EverySizeRowPacks) {
  for (const int n : {5, 10, 15, 25, 50, 100}) {
    for (const auto type : {NetworkType::Clustered, NetworkType::Random, NetworkType::Mixed}) {
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        EXPECT_NO_THROW(generate_instance(n, type, seed)) << "n=" << n << " seed=" << seed;
      }
    }
  }
}

TEST(GenerateInstance, RejectsNonPositiveSize) {
  EXPECT_THROW(generate_instance(0, NetworkType::Random, 1), std::invalid_argument);
}

TEST(GenerateInstance, TriangleInequality) {
  for (const auto type : {NetworkType::Clustered, NetworkType::Random, NetworkType::Mixed}) {
    const auto inst = generate_instance(25, type, 3);
    const std::size_t n = inst.num_nodes();
    ASSERT_LE(n, 50u);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          EXPECT_LE(inst.cost(i, j), inst.cost(i, k) + inst.cost(k, j) + 1e-9);
        }
      }
    }
  }
}

TEST(GenerateInstance, TinyInstancesAreFeasible) {
  for (int n = 4; n <= 7; ++n) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto inst = testing::tiny_generated(n, seed);
      const auto res = exhaustive_solve(inst, 0.6);
      ASSERT_EQ(res.status, OracleStatus::Optimal) << "n=" << n << " seed=" << seed;
      EXPECT_TRUE(check_feasible(res.solution, inst).feasible());
    }
  }
}

TEST(NetworkType, Names) {
  EXPECT_EQ(network_type_from_string("C"), NetworkType::Clustered);
  EXPECT_EQ(network_type_from_string("R"), NetworkType::Random);
  EXPECT_EQ(network_type_from_string("RC"), NetworkType::Mixed);
  EXPECT_THROW(network_type_from_string("Q"), std::invalid_argument);
}

}  // namespace
}  // namespace vrpod
