// Copyright 2026 The pmixed Authors
//
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

#include "pmixed/distribution.h"

#include <cmath>
#include <limits>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace pmixed {
namespace {

using ::testing::ElementsAre;

TEST(DistributionTest, CreateAcceptsNormalizedVector) {
  absl::StatusOr<Distribution> d = Distribution::Create({0.25, 0.75});
  ASSERT_TRUE(d.ok());
  EXPECT_THAT(d->probs(), ElementsAre(0.25, 0.75));
  EXPECT_EQ(d->size(), 2u);
}

TEST(DistributionTest, CreateRenormalizesWithinTolerance) {
  absl::StatusOr<Distribution> d = Distribution::Create({0.5, 0.5 + 5e-10});
  ASSERT_TRUE(d.ok());
  double sum = 0.0;
  for (double p : d->probs()) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-15);
}

TEST(DistributionTest, CreateRejectsBadInput) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_FALSE(Distribution::Create({1.0}).ok());
  EXPECT_FALSE(Distribution::Create({}).ok());
  EXPECT_FALSE(Distribution::Create({0.5, 0.6}).ok());
  EXPECT_FALSE(Distribution::Create({1.5, -0.5}).ok());
  EXPECT_FALSE(Distribution::Create({nan, 0.5}).ok());
  EXPECT_FALSE(Distribution::Create({inf, 0.0}).ok());
  EXPECT_EQ(Distribution::Create({0.5, 0.6}).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(DistributionTest, UniformAndPointMass) {
  Distribution u = testing::Unwrap(Distribution::Uniform(4));
  EXPECT_THAT(u.probs(), ElementsAre(0.25, 0.25, 0.25, 0.25));
  Distribution pm = testing::Unwrap(Distribution::PointMass(4, 3));
  EXPECT_THAT(pm.probs(), ElementsAre(0.0, 0.0, 0.0, 1.0));
  EXPECT_FALSE(Distribution::PointMass(4, 4).ok());
  EXPECT_FALSE(Distribution::Uniform(1).ok());
}

TEST(DistributionTest, MixtureEndpointsAreExact) {
  Distribution a = testing::Dist({0.1, 0.2, 0.7});
  Distribution b = testing::Dist({0.3, 0.3, 0.4});
  EXPECT_EQ(Distribution::Mixture(a, b, 1.0), a);
  EXPECT_EQ(Distribution::Mixture(a, b, 0.0), b);
}

TEST(DistributionTest, MeanOfOneIsItself) {
  Distribution a = testing::Dist({0.1, 0.2, 0.7});
  std::vector<Distribution> parts = {a};
  EXPECT_EQ(Distribution::Mean(parts), a);
}

TEST(DistributionTest, ArgmaxPrefersLowestIndexOnTies) {
  EXPECT_EQ(testing::Dist({0.4, 0.2, 0.4}).Argmax(), 0u);
  EXPECT_EQ(testing::Dist({0.1, 0.2, 0.7}).Argmax(), 2u);
}

}  // namespace
}  // namespace pmixed
