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

#include "dpswarm/objective.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dpswarm/errors.hpp"
#include "oracles.hpp"

namespace dpswarm {
namespace {

Dataset from_small(const oracle::SmallData& s) {
  std::vector<double> xs;
  for (const auto& row : s.x) xs.insert(xs.end(), row.begin(), row.end());
  return Dataset(s.n, s.d, xs, s.y, 1.0);
}

TEST(MseObjectiveTest, PerfectFit) {
  const Dataset data(3, 1, {1, 1, 1}, {1, 1, 1});
  EXPECT_EQ(mse_objective(data, {1.0}), 0.0);
  EXPECT_EQ(score(data, {1.0}), 0.0);
}

TEST(MseObjectiveTest, HandEvaluatedRows) {
  EXPECT_EQ(mse_objective(Dataset(1, 1, {1}, {0}), {1.0}), 1.0);
  EXPECT_EQ(score(Dataset(1, 1, {1}, {0}), {1.0}), -1.0);
  EXPECT_EQ(mse_objective(Dataset(1, 1, {0.5}, {1}), {1.0}), 0.25);
}

TEST(MseObjectiveTest, DimensionMismatch) {
  const Dataset data(1, 2, {0.1, 0.2}, {0.0});
  EXPECT_THROW(mse_objective(data, {1.0}), DomainError);
  EXPECT_THROW(score(data, {1.0, 2.0, 3.0}), DomainError);
}

TEST(MseObjectiveTest, ScoreIsNegatedMseAndPermutationInvariant) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto small = oracle::random_small_data(gen, 8, 4);
    const Dataset data = from_small(small);
    PositionVector pos(small.d);
    for (double& c : pos) c = w(gen);
    EXPECT_EQ(score(data, pos), -mse_objective(data, pos));
    EXPECT_NEAR(mse_objective(data, pos),
                oracle::mean_squared_error(small, {pos.begin(), pos.end()}),
                1e-12);
    std::vector<std::size_t> rows(small.n);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = rows.size() - 1 - i;
    EXPECT_NEAR(mse_objective(data.subset(rows), pos), mse_objective(data, pos),
                1e-14);
  }
}

TEST(MseObjectiveTest, LowerErrorMeansHigherScore) {
  const Dataset data(2, 1, {0.5, -0.5}, {0.5, -0.5});
  EXPECT_GT(score(data, {1.0}), score(data, {0.5}));
  EXPECT_GT(score(data, {0.5}), score(data, {-1.0}));
}

TEST(DatasetTest, Validation) {
  EXPECT_THROW(Dataset(0, 1, {}, {}), DomainError);
  EXPECT_THROW(Dataset(1, 1, {2.0}, {0.0}), DomainError);
  EXPECT_THROW(Dataset(1, 1, {0.0}, {-1.5}), DomainError);
  EXPECT_THROW(Dataset(1, 2, {0.0}, {0.0}), DomainError);
  EXPECT_NO_THROW(Dataset(1, 1, {2.0}, {0.0}, 2.0));
}

TEST(SensitivityBoundTest, PerPairExamples) {
  const std::vector<PositionVector> one = {{0.5, -0.5}};
  EXPECT_EQ(sensitivity_bound(one, 1.0, SensitivityMode::kPerPair, Bounds(), 2)
                .value(),
            4.0);
  const std::vector<PositionVector> zero = {{0.0, 0.0, 0.0}};
  EXPECT_EQ(sensitivity_bound(zero, 1.0, SensitivityMode::kPerPair, Bounds(), 3)
                .value(),
            1.0);
}

TEST(SensitivityBoundTest, GlobalExample) {
  EXPECT_EQ(sensitivity_bound({}, 1.0, SensitivityMode::kGlobal, Bounds(1.0), 2)
                .value(),
            9.0);
}

TEST(SensitivityBoundTest, PerPairTakesMaximum) {
  const std::vector<PositionVector> c = {{0.0}, {1.0}};
  EXPECT_EQ(
      sensitivity_bound(c, 1.0, SensitivityMode::kPerPair, Bounds(), 1).value(),
      4.0);
}

TEST(SensitivityBoundTest, Errors) {
  EXPECT_THROW(
      sensitivity_bound({}, 1.0, SensitivityMode::kPerPair, Bounds(), 2),
      DomainError);
  EXPECT_THROW(SensitivityBound(0.0), DomainError);
  EXPECT_THROW(SensitivityBound(-1.0), DomainError);
}

// Exhaustive bounded-neighbor enumeration on small datasets.
TEST(SensitivityBoundTest, SoundOnSmallInstances) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const auto small = oracle::random_small_data(gen, 6, 3);
    const Dataset data = from_small(small);
    PositionVector pos(small.d);
    for (double& c : pos) c = w(gen);
    const std::vector<PositionVector> cand = {pos};
    const double bound =
        sensitivity_bound(cand, 1.0, SensitivityMode::kPerPair, Bounds(),
                          small.d)
            .value();
    const double q = score(data, pos);
    oracle::for_each_neighbor(small, [&](const oracle::SmallData& nb) {
      ASSERT_LE(std::abs(q - score(from_small(nb), pos)), bound);
    });
  }
}

TEST(RmseTest, Examples) {
  const std::vector<double> a = {0.3, -0.2, 0.9};
  EXPECT_EQ(rmse(a, a), 0.0);
  EXPECT_EQ(rmse(std::vector<double>{0, 0}, std::vector<double>{1, 1}), 1.0);
  EXPECT_EQ(rmse(std::vector<double>{3}, std::vector<double>{0}), 3.0);
}

TEST(RmseTest, Errors) {
  EXPECT_THROW(rmse(std::vector<double>{}, std::vector<double>{}), DomainError);
  EXPECT_THROW(rmse(std::vector<double>{1}, std::vector<double>{1, 2}),
               DomainError);
}

TEST(RmseTest, ScalesWithResiduals) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> v(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> p(1 + trial % 9);
    std::vector<double> zero(p.size(), 0.0);
    for (double& x : p) x = v(gen);
    const double c = v(gen);
    std::vector<double> scaled = p;
    for (double& x : scaled) x *= c;
    EXPECT_NEAR(rmse(scaled, zero), std::abs(c) * rmse(p, zero), 1e-12);
  }
}

}  // namespace
}  // namespace dpswarm
