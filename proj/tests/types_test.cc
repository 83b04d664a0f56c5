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

#include "dpswarm/types.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "dpswarm/errors.hpp"

namespace dpswarm {
namespace {

TEST(ClampTest, InsideBoxUnchanged) {
  EXPECT_EQ(clamp({0.3, -0.7}, Bounds(1.0)), (PositionVector{0.3, -0.7}));
}

TEST(ClampTest, UpperAndLower) {
  EXPECT_EQ(clamp({1.5}, Bounds(1.0)), (PositionVector{1.0}));
  EXPECT_EQ(clamp({-2.0, 0.0}, Bounds(1.0)), (PositionVector{-1.0, 0.0}));
}

TEST(ClampTest, NonFiniteNamesIndex) {
  try {
    clamp({0.0, std::numeric_limits<double>::quiet_NaN()}, Bounds(1.0));
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("coordinate 1"), std::string::npos);
  }
  EXPECT_THROW(clamp({std::numeric_limits<double>::infinity()}, Bounds(1.0)),
               DomainError);
}

TEST(ClampTest, IdempotentProjection) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::uniform_real_distribution<double> width(0.01, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Bounds b(width(gen));
    PositionVector p(1 + trial % 6);
    for (double& c : p) c = coord(gen);
    const PositionVector once = clamp(p, b);
    EXPECT_TRUE(b.contains(once));
    EXPECT_EQ(clamp(once, b), once);
    ASSERT_EQ(once.size(), p.size());
  }
}

TEST(BoundsTest, RejectsNonPositive) {
  EXPECT_THROW(Bounds(0.0), ConfigError);
  EXPECT_THROW(Bounds(-1.0), ConfigError);
  EXPECT_THROW(Bounds(std::numeric_limits<double>::infinity()), ConfigError);
  EXPECT_EQ(Bounds().w_max(), 1.0);
}

}  // namespace
}  // namespace dpswarm
