#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "fixtures.hpp"
#include "vrpod/oracle.hpp"

namespace vrpod::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("vrpod_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_instance(const std::string& file, const Instance& inst) {
    const auto path = dir_ / file;
    std::ofstream(path) << serialize_instance(inst);
    return path.string();
  }

  static std::string read(const fs::path& path) {
    std::ifstream f(path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
  }

  static std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
  }

  static std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream s(line);
    for (std::string f; std::getline(s, f, ',');) out.push_back(f);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
  }

  fs::path dir_;
};

TEST_F(CliTest, SolveWritesSolutionAndTrace) {
  const auto inst = testing::tiny_generated(5, 1);
  SolveOptions opts;
  opts.instance_path = write_instance("tiny.txt", inst);
  opts.run.seed = 7;
  opts.run.max_iterations = 20;
  opts.out_dir = (dir_ / "out").string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_solve(opts, out, err), kOk) << err.str();
  EXPECT_EQ(out.str().rfind("cost ", 0), 0u);
  const auto trace = lines(read(dir_ / "out" / (inst.name + ".stats.csv")));
  ASSERT_FALSE(trace.empty());
  EXPECT_EQ(trace[0], kTraceHeader);
  const auto solution = solution_from_json(read(dir_ / "out" / (inst.name + ".solution.json")));
  EXPECT_TRUE(check_feasible(solution, inst).feasible());

  std::ostringstream vout, verr;
  EXPECT_EQ(cmd_validate(opts.instance_path, (dir_ / "out" / (inst.name + ".solution.json")).string(), 0.6, vout, verr),
            kOk);
  EXPECT_EQ(vout.str().rfind("feasible cost", 0), 0u);
}

TEST_F(CliTest, MissingFileIsBadInput) {
  SolveOptions opts;
  opts.instance_path = (dir_ / "nope.txt").string();
  std::ostringstream out, err;
  EXPECT_EQ(cmd_solve(opts, out, err), kBadInput);
  EXPECT_NE(err.str().find("not found"), std::string::npos);

  ExportOptions eo;
  eo.instance_path = opts.instance_path;
  EXPECT_EQ(cmd_export(eo, out, err), kBadInput);
}

TEST_F(CliTest, MalformedParamsAreBadInput) {
  SolveOptions opts;
  opts.instance_path = write_instance("tiny.txt", testing::tiny_generated(4, 1));
  std::ofstream(dir_ / "bad.params") << "alpha=lots\n";
  opts.run.params_path = (dir_ / "bad.params").string();
  std::ostringstream out, err;
  EXPECT_EQ(cmd_solve(opts, out, err), kBadInput);
}

TEST_F(CliTest, VariantsMapToParameters) {
  const auto inst = testing::tiny_generated(5, 1);
  RunOptions run;
  run.variant = "vm+l";
  EXPECT_TRUE(resolve_params(inst, run).use_vnd);
  run.variant = "mp";
  EXPECT_EQ(resolve_params(inst, run).pct_mi, 0.0);
  std::ofstream(dir_ / "p.params") << "pct_mi=0.2\n";
  run.params_path = (dir_ / "p.params").string();
  EXPECT_EQ(resolve_params(inst, run).pct_mi, 0.0);
  run.variant = "vm";
  EXPECT_DOUBLE_EQ(resolve_params(inst, run).pct_mi, 0.2);
}

TEST(PercentGap, HandValues) {
  EXPECT_DOUBLE_EQ(percent_gap(97.0, 100.0), -3.0);
  EXPECT_DOUBLE_EQ(percent_gap(100.0, 100.0), 0.0);
}

TEST(RunSeed, DistinctPerRun) {
  std::set<std::uint64_t> seeds;
  for (std::size_t r = 0; r < 30; ++r) seeds.insert(run_seed(1, r));
  EXPECT_EQ(seeds.size(), 30u);
}

TEST_F(CliTest, BenchmarkCsvsAreConsistent) {
  fs::create_directories(dir_ / "inst");
  write_instance("inst/a.txt", testing::tiny_generated(4, 1));
  write_instance("inst/b.txt", testing::tiny_generated(5, 2));
  std::ofstream(dir_ / "inst" / "broken.txt") << "NAME broken\nFLEET x\n";

  BenchmarkOptions opts;
  opts.instance_dir = (dir_ / "inst").string();
  opts.runs = 3;
  opts.run.seed = 5;
  opts.run.max_iterations = 10;
  opts.out_dir = (dir_ / "out").string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_benchmark(opts, out, err), kOk) << err.str();
  EXPECT_NE(err.str().find("skipping"), std::string::npos);

  const auto runs = lines(read(dir_ / "out" / "runs.csv"));
  const auto summary = lines(read(dir_ / "out" / "summary.csv"));
  ASSERT_EQ(runs.size(), 2u + 6u);
  EXPECT_EQ(runs[0].rfind("# ", 0), 0u);
  EXPECT_EQ(runs[1], kRunsHeader);
  ASSERT_EQ(summary.size(), 2u + 2u + 1u);
  EXPECT_EQ(summary[1], kSummaryHeader);
  EXPECT_EQ(summary.back().rfind("AVG,", 0), 0u);

  // Means recomputed from the per-run rows.
  std::map<std::string, std::pair<double, int>> sums;
  for (std::size_t i = 2; i < runs.size(); ++i) {
    const auto f = split(runs[i]);
    sums[f[0]].first += std::stod(f[3]);
    sums[f[0]].second += 1;
    EXPECT_EQ(std::stoull(f[2]), run_seed(5, std::stoul(f[1])));
  }
  std::ofstream refs(dir_ / "refs.csv");
  refs << "instance,reference,mp\n";
  for (std::size_t i = 2; i + 1 < summary.size(); ++i) {
    const auto f = split(summary[i]);
    const auto& [total, count] = sums.at(f[0]);
    EXPECT_NEAR(std::stod(f[2]), total / count, 1e-6);
    refs << f[0] << ',' << f[2] << ',' << std::stod(f[2]) / 0.97 << '\n';
  }
  refs.close();

  // Same seeds, references equal to the measured means.
  opts.refs_path = (dir_ / "refs.csv").string();
  std::ostringstream out2, err2;
  ASSERT_EQ(cmd_benchmark(opts, out2, err2), kOk);
  const auto again = lines(read(dir_ / "out" / "summary.csv"));
  for (std::size_t i = 2; i < again.size(); ++i) {
    const auto f = split(again[i]);
    ASSERT_EQ(f.size(), 7u) << again[i];
    EXPECT_EQ(f[5], "0.00") << again[i];
    EXPECT_EQ(f[6], "-3.00") << again[i];
  }
}

TEST_F(CliTest, TttRowsAndSentinels) {
  const auto inst = testing::tiny_generated(5, 4);
  const auto oracle = exhaustive_solve(inst, 0.6);
  ASSERT_EQ(oracle.status, OracleStatus::Optimal);
  TttOptions opts;
  opts.instance_path = write_instance("t.txt", inst);
  opts.runs = 4;
  opts.run.time_limit = 10;
  opts.target = oracle.cost + 1e-6;
  opts.out_path = (dir_ / "ttt.csv").string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_ttt(opts, out, err), kOk);
  auto rows = lines(read(dir_ / "ttt.csv"));
  ASSERT_EQ(rows.size(), 2u + 4u);
  EXPECT_EQ(rows[1], kTttHeader);
  for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_NE(split(rows[i])[2], "inf");

  opts.target = -1e18;
  opts.run.time_limit = 0.2;
  std::ostringstream out2;
  ASSERT_EQ(cmd_ttt(opts, out2, err), kOk);
  rows = lines(read(dir_ / "ttt.csv"));
  ASSERT_EQ(rows.size(), 2u + 4u);
  for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_EQ(split(rows[i])[2], "inf");
}

TEST_F(CliTest, GenerateOracleExportRoundTrip) {
  GenerateOptions g;
  g.customers = 4;
  g.type = "RC";
  g.seed = 3;
  g.company = 2;
  g.ods = 2;
  g.out_path = (dir_ / "gen.txt").string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_generate(g, out, err), kOk);
  const auto inst = load_instance(*g.out_path);
  EXPECT_EQ(inst.num_customers(), 4u);

  OracleOptions o;
  o.instance_path = *g.out_path;
  o.out_path = (dir_ / "opt.json").string();
  std::ostringstream oout;
  ASSERT_EQ(cmd_oracle(o, oout, err), kOk);
  EXPECT_EQ(oout.str().rfind("optimal cost", 0), 0u) << oout.str();
  std::ostringstream vout;
  EXPECT_EQ(cmd_validate(*g.out_path, *o.out_path, 0.6, vout, err), kOk);

  ExportOptions e;
  e.instance_path = *g.out_path;
  e.out_path = (dir_ / "model.lp").string();
  ASSERT_EQ(cmd_export(e, out, err), kOk);
  EXPECT_EQ(read(*e.out_path), export_milp(inst, 0.6));
}

}  // namespace
}  // namespace vrpod::cli
