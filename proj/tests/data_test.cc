// Copyright 2026 The dpswarm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpswarm/data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <gtest/gtest.h>

#include "dpswarm/errors.hpp"

namespace dpswarm {
namespace {

std::string load_error_message(const std::string& text) {
  try {
    parse_csv(text);
  } catch (const LoadError& e) {
    return e.what();
  }
  return "";
}

TEST(LoadCsvTest, WellFormedFile) {
  const auto path = std::filesystem::temp_directory_path() / "dpswarm_load.csv";
  {
    std::ofstream out(path);
    out << "a,b,y\n1,2,3\n4,5,6\n7,8.5,-9e0\n";
  }
  const RawTable t = load_csv(path);
  EXPECT_EQ(t.n(), 3u);
  EXPECT_EQ(t.d(), 2u);
  EXPECT_EQ(t.target_column, 2u);
  EXPECT_EQ(t.rows[2][2], -9.0);
  std::filesystem::remove(path);
}

TEST(LoadCsvTest, TargetSelection) {
  const std::string text = "y,a,b\n1,2,3\n";
  EXPECT_EQ(parse_csv(text, std::string("y")).target_column, 0u);
  EXPECT_EQ(parse_csv(text, std::size_t{1}).target_column, 1u);
  EXPECT_THROW(parse_csv(text, std::string("z")), LoadError);
  EXPECT_THROW(parse_csv(text, std::size_t{3}), LoadError);
}

TEST(LoadCsvTest, NonNumericCellCitesRow) {
  const std::string msg = load_error_message("a,y\n1,2\nabc,3\n");
  EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("column 1"), std::string::npos) << msg;
}

TEST(LoadCsvTest, RejectsBadFiles) {
  EXPECT_THROW(parse_csv("a,b,y\n"), LoadError);
  EXPECT_THROW(parse_csv(""), LoadError);
  EXPECT_THROW(parse_csv("a,y\n1,2\n3\n"), LoadError);
  EXPECT_THROW(parse_csv("a,y\n1,nan\n"), LoadError);
  EXPECT_THROW(parse_csv("a,y\n1,inf\n"), LoadError);
  EXPECT_THROW(load_csv("/nonexistent/dpswarm.csv"), LoadError);
}

TEST(LoadCsvTest, ToleratesCrlfAndTrailingBlankLine) {
  const RawTable t = parse_csv("a,y\r\n1,2\r\n3,4\r\n\r\n");
  EXPECT_EQ(t.n(), 2u);
  EXPECT_EQ(t.rows[1][1], 4.0);
}

TEST(NormalizeTest, ColumnExamples) {
  RawTable t;
  t.header = {"x0", "x1", "x2", "y"};
  t.rows = {{0, 7, -1, 1}, {5, 7, 0.25, 2}, {10, 7, 1, 3}};
  t.target_column = 3;
  const NormalizedData nd = normalize(t);
  const Dataset& ds = nd.data;
  EXPECT_EQ(ds.a(), 1.0);
  EXPECT_EQ(ds.row(0)[0], -1.0);
  EXPECT_EQ(ds.row(1)[0], 0.0);
  EXPECT_EQ(ds.row(2)[0], 1.0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(ds.row(i)[1], 0.0);
  EXPECT_EQ(ds.row(0)[2], -1.0);
  EXPECT_EQ(ds.row(1)[2], 0.25);
  EXPECT_EQ(ds.row(2)[2], 1.0);
  EXPECT_EQ(ds.y(0), -1.0);
  EXPECT_EQ(ds.y(1), 0.0);
  EXPECT_EQ(ds.y(2), 1.0);
}

TEST(NormalizeTest, TargetInMiddleColumn) {
  const NormalizedData nd = normalize(parse_csv("a,y,b\n0,10,1\n2,20,3\n", std::string("y")));
  EXPECT_EQ(nd.data.d(), 2u);
  EXPECT_EQ(nd.data.row(1)[1], 1.0);
  EXPECT_EQ(nd.target_range.min, 10.0);
  EXPECT_EQ(nd.target_range.max, 20.0);
}

TEST(NormalizeTest, InverseRecoversOriginalsProperty) {
  RngStream rng = fork_stream(17, "data");
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(20), d = 1 + rng.below(4);
    const double scale = std::pow(10.0, rng.uniform(-3, 4));
    RawTable t;
    t.header.resize(d + 1, "c");
    t.target_column = rng.below(d + 1);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(d + 1);
      for (double& v : row) v = scale * rng.uniform(-1, 1);
      t.rows.push_back(row);
    }
    const NormalizedData nd = normalize(t);
    std::vector<ColumnRange> ranges = nd.feature_ranges;
    ranges.insert(ranges.begin() + static_cast<std::ptrdiff_t>(t.target_column),
                  nd.target_range);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t f = 0;
      for (std::size_t c = 0; c <= d; ++c) {
        const double v = c == t.target_column ? nd.data.y(i) : nd.data.row(i)[f++];
        ASSERT_GE(v, -1.0);
        ASSERT_LE(v, 1.0);
        EXPECT_NEAR(denormalize(v, ranges[c]), t.rows[i][c], 1e-12 * scale);
      }
    }
  }
}

void expect_partition(const FoldPlan& plan, std::size_t n) {
  for (int rep = 0; rep < plan.repeats; ++rep) {
    std::vector<std::size_t> all;
    std::size_t lo = n, hi = 0;
    for (const auto& fold : plan.assignments[rep]) {
      all.insert(all.end(), fold.begin(), fold.end());
      lo = std::min(lo, fold.size());
      hi = std::max(hi, fold.size());
    }
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expected(n);
    std::iota(expected.begin(), expected.end(), 0);
    EXPECT_EQ(all, expected);
    EXPECT_LE(hi - lo, 1u);
  }
}

TEST(KfoldTest, SingletonFolds) {
  RngStream rng = fork_stream(1, "data");
  const FoldPlan plan = kfold(10, 10, 1, rng);
  for (const auto& fold : plan.assignments[0]) EXPECT_EQ(fold.size(), 1u);
  expect_partition(plan, 10);
}

TEST(KfoldTest, RemainderDistribution) {
  RngStream rng = fork_stream(1, "data");
  const FoldPlan plan = kfold(11, 10, 1, rng);
  std::vector<std::size_t> sizes;
  for (const auto& fold : plan.assignments[0]) sizes.push_back(fold.size());
  EXPECT_EQ(std::count(sizes.begin(), sizes.end(), 1u), 9);
  EXPECT_EQ(std::count(sizes.begin(), sizes.end(), 2u), 1);
}

TEST(KfoldTest, PermutationProperty) {
  RngStream rng = fork_stream(5, "data");
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(9));
    const std::size_t n = k + rng.below(60);
    const FoldPlan plan = kfold(n, k, 1 + static_cast<int>(rng.below(3)), rng);
    expect_partition(plan, n);
    const auto train = plan.training_rows(0, 0);
    EXPECT_EQ(train.size() + plan.assignments[0][0].size(), n);
  }
}

TEST(KfoldTest, DeterministicAndRepeatsDiffer) {
  RngStream a = fork_stream(9, "data");
  RngStream b = fork_stream(9, "data");
  const FoldPlan pa = kfold(50, 5, 3, a);
  EXPECT_EQ(pa, kfold(50, 5, 3, b));
  EXPECT_NE(pa.assignments[0], pa.assignments[1]);
}

TEST(KfoldTest, InvalidArguments) {
  RngStream rng = fork_stream(1, "data");
  EXPECT_THROW(kfold(5, 10, 1, rng), ConfigError);
  EXPECT_THROW(kfold(5, 1, 1, rng), ConfigError);
  EXPECT_THROW(kfold(5, 2, 0, rng), ConfigError);
}

TEST(FoldPlanJsonTest, RoundTrip) {
  RngStream rng = fork_stream(2, "data");
  const FoldPlan plan = kfold(23, 4, 2, rng);
  EXPECT_EQ(fold_plan_from_json(fold_plan_to_json(plan)), plan);
}

TEST(FoldPlanJsonTest, RejectsNonPartition) {
  EXPECT_THROW(fold_plan_from_json("not json"), LoadError);
  EXPECT_THROW(fold_plan_from_json(R"({"k":2,"repeats":1,"assignments":[[[0,1],[1]]]})"),
               LoadError);
  EXPECT_THROW(fold_plan_from_json(R"({"k":2,"repeats":1,"assignments":[[[0,1,2],[3]]]})"),
               LoadError);
  EXPECT_NO_THROW(fold_plan_from_json(R"({"k":2,"repeats":1,"assignments":[[[2,0],[1,3]]]})"));
}

TEST(SynthLinearTest, NoiselessFitIsExact) {
  RngStream rng = fork_stream(4, "data");
  const PositionVector w{0.3, -0.2, 0.1};
  const Dataset ds = synth_linear(200, 3, w, 0.0, rng);
  EXPECT_EQ(ds.n(), 200u);
  EXPECT_LT(mse_objective(ds, w), 1e-30);
  EXPECT_EQ(rng.cursor(), 600u);
}

TEST(SynthLinearTest, ClippedAndDeterministic) {
  RngStream a = fork_stream(4, "data");
  RngStream b = fork_stream(4, "data");
  const PositionVector w{1.0, 1.0};
  const Dataset da = synth_linear(300, 2, w, 0.5, a);
  const Dataset db = synth_linear(300, 2, w, 0.5, b);
  EXPECT_TRUE(std::ranges::equal(da.ys(), db.ys()));
  EXPECT_TRUE(std::ranges::equal(da.xs(), db.xs()));
  EXPECT_EQ(a.cursor(), 300u * 4u);
  bool clipped = false;
  for (double y : da.ys()) {
    EXPECT_LE(std::abs(y), 1.0);
    clipped = clipped || std::abs(y) == 1.0;
  }
  EXPECT_TRUE(clipped);
}

}  // namespace
}  // namespace dpswarm
