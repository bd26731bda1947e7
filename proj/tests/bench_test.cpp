// Copyright 2026 The cutsat Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cutsat/bench.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "testing.hpp"

namespace cutsat {
namespace {

BenchRow row(std::string inst, std::string cfg, RowStatus s, int k, uint64_t v, uint64_t c,
             std::optional<double> ttb) {
  return {std::move(inst), std::move(cfg), s, k, v, c, ttb};
}

TEST(Bench, GapOfOneExtraSheetOverTwo) {
  const std::vector<BenchRow> rows = {row("a", "CSP", RowStatus::kTimeout, 3, 10, 20, {})};
  const auto m = aggregate(rows, BksTable{{"a", 2}});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_DOUBLE_EQ(m[0].gap_percent, 50.0);
  EXPECT_EQ(m[0].n_opt, 0);
  EXPECT_EQ(m[0].n_feas, 0);
  EXPECT_EQ(m[0].avg_ttb, 0.0);
}

TEST(Bench, AverageTtbSkipsTimeouts) {
  const std::vector<BenchRow> rows = {
      row("a", "X", RowStatus::kOpt, 2, 1000, 2000000, 1.0),
      row("b", "X", RowStatus::kFeas, 3, 1000, 1000000, 3.0),
      row("c", "X", RowStatus::kTimeout, 5, 500, 0, 100.0),
  };
  const auto m = aggregate(rows, BksTable{{"a", 2}, {"b", 3}, {"c", 4}});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].n_opt, 1);
  EXPECT_EQ(m[0].n_feas, 1);
  EXPECT_DOUBLE_EQ(m[0].avg_ttb, 2.0);
  EXPECT_DOUBLE_EQ(m[0].total_vars, 2.5);
  EXPECT_DOUBLE_EQ(m[0].total_clauses, 3.0);
  EXPECT_DOUBLE_EQ(m[0].gap_percent, 25.0 / 3);
}

TEST(Bench, MissingBksIsReported) {
  const std::vector<BenchRow> rows = {row("a", "X", RowStatus::kOpt, 2, 0, 0, 0.0),
                                      row("z", "X", RowStatus::kOpt, 9, 0, 0, 0.0)};
  const auto m = aggregate(rows, BksTable{{"a", 2}});
  EXPECT_EQ(m[0].gap_instances, 1);
  EXPECT_EQ(m[0].missing_bks, std::vector<std::string>{"z"});
  EXPECT_DOUBLE_EQ(m[0].gap_percent, 0.0);
}

TEST(Bench, Classify) {
  SolveOutcome o;
  o.status = OutcomeStatus::kOptimal;
  EXPECT_EQ(classify(o, std::nullopt), RowStatus::kOpt);
  o.status = OutcomeStatus::kFeasible;
  o.best_k = 4;
  EXPECT_EQ(classify(o, 4), RowStatus::kFeas);
  EXPECT_EQ(classify(o, 3), RowStatus::kTimeout);
  EXPECT_EQ(classify(o, std::nullopt), RowStatus::kTimeout);
  o.status = OutcomeStatus::kUnknown;
  EXPECT_EQ(classify(o, 9), RowStatus::kTimeout);
}

TEST(Bench, CsvRoundTrip) {
  const std::vector<BenchRow> rows = {row("a", "CSP", RowStatus::kOpt, 2, 12, 34, 1.25),
                                      row("b", "CSP_MS_R", RowStatus::kTimeout, 7, 0, 0, {})};
  std::ostringstream out;
  write_bench_csv(out, rows);
  std::istringstream in(out.str());
  EXPECT_EQ(read_bench_csv(in), rows);
}

TEST(Bench, CsvRejectsGarbage) {
  std::istringstream bad("instance,config,status,k,vars,clauses,ttb\na,CSP,maybe,2,1,1,1\n");
  EXPECT_THROW(read_bench_csv(bad), InputError);
}

TEST(Bench, EmptyDirectoryGivesEmptyReport) {
  const auto dir = std::filesystem::temp_directory_path() / "cutsat_bench_empty";
  std::filesystem::create_directories(dir);
  const auto r = run_bench(list_instances(dir.string()), {}, {});
  EXPECT_TRUE(r.rows.empty());
  EXPECT_TRUE(aggregate(r.rows, {}).empty());
}

TEST(Bench, RunsFixtureDirectory) {
  BenchOptions opts;
  opts.jobs = 2;
  for (const auto* l : {"CSP", "CSP_INC_SB", "CSP_MS_R"}) opts.configs.push_back(*parse_config_label(l));
  const auto insts = list_instances(testing::data_path("instances"));
  ASSERT_EQ(insts.size(), 3u);
  const auto r = run_bench(insts, BksTable{{"fig1", 2}, {"gap3", 3}, {"gap4", 4}}, opts);
  ASSERT_EQ(r.rows.size(), 9u);
  for (const auto& x : r.rows) EXPECT_EQ(x.status, RowStatus::kOpt) << x.instance << ' ' << x.config;
  for (const auto& m : aggregate(r.rows, BksTable{{"fig1", 2}, {"gap3", 3}, {"gap4", 4}}))
    EXPECT_DOUBLE_EQ(m.gap_percent, 0.0);
}

struct SummaryRow {
  int n_opt, n_feas;
  double avg_ttb, vars_k, clauses_m, gap;
};

std::map<std::string, SummaryRow> read_summary() {
  std::ifstream in(testing::data_path("published/summary.csv"));
  std::map<std::string, SummaryRow> out;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto c = detail::split_csv(line);
    out[c[0]] = {std::stoi(c[1]), std::stoi(c[2]), std::stod(c[3]),
                 std::stod(c[4]), std::stod(c[5]), std::stod(c[6])};
  }
  return out;
}

class PublishedTable : public ::testing::TestWithParam<const char*> {};

TEST_P(PublishedTable, AggregationReproducesSummary) {
  std::ifstream bin(testing::data_path("published/bks.csv"));
  const BksTable bks = read_bks_csv(bin);
  ASSERT_EQ(bks.size(), 30u);
  std::ifstream rin(testing::data_path(std::string("published/") + GetParam()));
  const auto rows = read_bench_csv(rin);
  ASSERT_EQ(rows.size(), 180u);
  const auto summary = read_summary();
  const auto metrics = aggregate(rows, bks);
  ASSERT_EQ(metrics.size(), 6u);
  for (const auto& m : metrics) {
    SCOPED_TRACE(m.config);
    ASSERT_TRUE(summary.count(m.config));
    const auto& s = summary.at(m.config);
    EXPECT_EQ(m.instances, 30);
    EXPECT_TRUE(m.missing_bks.empty());
    EXPECT_EQ(m.n_opt, s.n_opt);
    EXPECT_EQ(m.n_feas, s.n_feas);
    EXPECT_NEAR(m.gap_percent, s.gap, 0.5);
    EXPECT_NEAR(m.avg_ttb, s.avg_ttb, 0.15);
    EXPECT_NEAR(m.total_vars, s.vars_k, s.vars_k * 0.005);
    EXPECT_NEAR(m.total_clauses, s.clauses_m, s.clauses_m * 0.005);
  }
}

INSTANTIATE_TEST_SUITE_P(Tables, PublishedTable,
                         ::testing::Values("table_norot.csv", "table_rot.csv"));

}  // namespace
}  // namespace cutsat
