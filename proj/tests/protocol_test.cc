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

#include "pmixed/protocol.h"

#include <cmath>
#include <memory>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace pmixed {
namespace {

using testing::Dist;
using ::testing::DoubleNear;
using ::testing::ElementsAre;
using ::testing::Pointwise;
using testing::Unwrap;

ModelHandle Fixed(const Distribution& d) {
  return std::make_shared<TableModel>(d.size(), d);
}

// Three private models and a public one over four tokens.
struct SmallWorld {
  std::vector<ModelHandle> ensemble = {Fixed(Dist({0.7, 0.1, 0.1, 0.1})),
                                       Fixed(Dist({0.1, 0.7, 0.1, 0.1})),
                                       Fixed(Dist({0.1, 0.1, 0.7, 0.1}))};
  Distribution public_dist = Dist({0.25, 0.25, 0.25, 0.25});
  ModelHandle public_model = Fixed(public_dist);

  PrivacyParams Params(double q, int64_t budget = 16) const {
    PrivacyParams p;
    p.ensemble_size = 3;
    p.sampling_rate = q;
    p.query_budget = budget;
    return p;
  }
};

TEST(PoissonSubsampleTest, FullRateIncludesEveryone) {
  RandomSource rng(1);
  EXPECT_THAT(PoissonSubsample(5, 1.0, rng), ElementsAre(0, 1, 2, 3, 4));
}

TEST(PoissonSubsampleTest, TinyRateIsUsuallyEmpty) {
  RandomSource rng(2);
  int empty = 0;
  for (int i = 0; i < 1000; ++i)
    empty += PoissonSubsample(80, 1e-9, rng).empty();
  EXPECT_EQ(empty, 1000);
}

TEST(PoissonSubsampleTest, MeanSubsetSizeIsNq) {
  RandomSource rng(20261015);
  const int draws = 10000;
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) sum += PoissonSubsample(80, 0.03, rng).size();
  const double mean = sum / draws;
  const double se = std::sqrt(80 * 0.03 * 0.97 / draws);
  EXPECT_NEAR(mean, 2.4, 3 * se);
}

TEST(AggregateTest, Examples) {
  Distribution a = Dist({0.2, 0.8});
  std::vector<Distribution> one = {a};
  EXPECT_EQ(Unwrap(Aggregate(one)), a);
  std::vector<Distribution> two = {Dist({1.0, 0.0}), Dist({0.0, 1.0})};
  EXPECT_THAT(Unwrap(Aggregate(two)).probs(), ElementsAre(0.5, 0.5));
  std::vector<Distribution> three = {
      Dist({0.1, 0.2, 0.7}), Dist({0.3, 0.3, 0.4}), Dist({0.5, 0.4, 0.1})};
  EXPECT_THAT(Unwrap(Aggregate(three)).probs(),
              Pointwise(DoubleNear(1e-15),
                        std::vector<double>{0.9 / 3, 0.9 / 3, 1.2 / 3}));
}

TEST(AggregateTest, RejectsEmptyAndMismatched) {
  EXPECT_FALSE(Aggregate({}).ok());
  std::vector<Distribution> mixed = {Dist({0.5, 0.5}), Dist({0.2, 0.3, 0.5})};
  EXPECT_FALSE(Aggregate(mixed).ok());
}

TEST(SampleTokenTest, PointMass) {
  RandomSource rng(3);
  Distribution d = Unwrap(Distribution::PointMass(5, 3));
  for (int i = 0; i < 100; ++i) EXPECT_EQ(SampleToken(d, rng), 3);
}

TEST(SampleTokenTest, UniformFrequencies) {
  RandomSource rng(20261015);
  Distribution u = Unwrap(Distribution::Uniform(4));
  const int draws = 100000;
  std::vector<int> counts(4, 0);
  for (int i = 0; i < draws; ++i) ++counts[SampleToken(u, rng)];
  const double se = std::sqrt(0.25 * 0.75 / draws);
  for (int c : counts)
    EXPECT_NEAR(static_cast<double>(c) / draws, 0.25, 3 * se);
}

TEST(SampleTokenTest, FixedSeedIsReproducible) {
  Distribution d = Dist({0.1, 0.2, 0.3, 0.4});
  RandomSource a(42), b(42);
  for (int i = 0; i < 1000; ++i)
    EXPECT_EQ(SampleToken(d, a), SampleToken(d, b));
}

TEST(MollifyAndAggregateTest, EmptySubsetGivesPublic) {
  Distribution pub = Dist({0.3, 0.7});
  MollifiedAggregate m =
      Unwrap(MollifyAndAggregate({}, pub, Unwrap(RenyiOrder::Finite(3)),
                                 Unwrap(MollifierRadius::Create(0.1))));
  EXPECT_EQ(m.aggregate, pub);
  EXPECT_TRUE(m.lambdas.empty());
}

TEST(ProtocolSessionTest, CreateValidatesInputs) {
  SmallWorld w;
  SessionOptions opts;
  PrivacyParams wrong_size = w.Params(1.0);
  wrong_size.ensemble_size = 4;
  EXPECT_FALSE(
      ProtocolSession::Create(w.ensemble, w.public_model, wrong_size, opts)
          .ok());
  EXPECT_FALSE(
      ProtocolSession::Create(w.ensemble, nullptr, w.Params(1.0), opts).ok());
  std::vector<ModelHandle> with_null = w.ensemble;
  with_null[1] = nullptr;
  EXPECT_FALSE(
      ProtocolSession::Create(with_null, w.public_model, w.Params(1.0), opts)
          .ok());
  EXPECT_FALSE(ProtocolSession::Create(w.ensemble, Fixed(Dist({0.5, 0.5})),
                                       w.Params(1.0), opts)
                   .ok());
}

TEST(ProtocolSessionTest, EmptySubsetReleasesThePublicDistribution) {
  SmallWorld w;
  ProtocolSession s = Unwrap(ProtocolSession::Create(
      w.ensemble, w.public_model, w.Params(1e-12), SessionOptions()));
  QueryRecord r = Unwrap(s.Respond({}));
  EXPECT_TRUE(r.subset.empty());
  EXPECT_TRUE(r.lambdas.empty());
  EXPECT_EQ(r.aggregate, w.public_dist);
}

TEST(ProtocolSessionTest, ZeroRadiusReleasesThePublicDistribution) {
  SmallWorld w;
  SessionOptions opts;
  opts.radius_override = 0.0;
  ProtocolSession s = Unwrap(
      ProtocolSession::Create(w.ensemble, w.public_model, w.Params(1.0), opts));
  EXPECT_EQ(s.beta_star(), 0.0);
  QueryRecord r = Unwrap(s.Respond({}));
  EXPECT_THAT(r.subset, ElementsAre(0, 1, 2));
  EXPECT_THAT(r.lambdas, ElementsAre(0.0, 0.0, 0.0));
  EXPECT_EQ(r.aggregate, w.public_dist);
}

TEST(ProtocolSessionTest, SlackRadiusGivesTheUnconstrainedMean) {
  SmallWorld w;
  SessionOptions opts;
  opts.radius_override = 1.0;
  PrivacyParams p = w.Params(1.0, 1);
  p.global_epsilon = 1e6;
  ProtocolSession s =
      Unwrap(ProtocolSession::Create(w.ensemble, w.public_model, p, opts));
  QueryRecord r = Unwrap(s.Respond({}));
  EXPECT_THAT(r.lambdas, ElementsAre(1.0, 1.0, 1.0));
  EXPECT_THAT(
      r.aggregate.probs(),
      Pointwise(DoubleNear(1e-15), std::vector<double>{0.3, 0.3, 0.3, 0.1}));
}

TEST(ProtocolSessionTest, RadiusOverrideMustFitTheBudget) {
  SmallWorld w;
  SessionOptions opts;
  opts.radius_override = 10.0;
  EXPECT_FALSE(
      ProtocolSession::Create(w.ensemble, w.public_model, w.Params(1.0), opts)
          .ok());
}

TEST(ProtocolSessionTest, LambdasAreFeasibleForTheSessionRadius) {
  SmallWorld w;
  ProtocolSession s = Unwrap(ProtocolSession::Create(
      w.ensemble, w.public_model, w.Params(0.5), SessionOptions()));
  const RenyiOrder a = Unwrap(RenyiOrder::Finite(3));
  const MollifierRadius b = Unwrap(MollifierRadius::Create(s.beta_star()));
  for (int i = 0; i < 16; ++i) {
    QueryRecord r = Unwrap(s.Respond({}));
    ASSERT_EQ(r.lambdas.size(), r.subset.size());
    for (size_t j = 0; j < r.subset.size(); ++j) {
      Distribution p = Unwrap(w.ensemble[r.subset[j]]->Predict({}));
      Distribution mixed = Unwrap(Mix(p, w.public_dist, r.lambdas[j]));
      EXPECT_TRUE(Unwrap(InMollifier(mixed, w.public_dist, a, b)));
    }
  }
}

TEST(ProtocolSessionTest, AnswersExactlyTheBudget) {
  SmallWorld w;
  ProtocolSession s = Unwrap(ProtocolSession::Create(
      w.ensemble, w.public_model, w.Params(0.5, 5), SessionOptions()));
  std::vector<std::vector<TokenId>> queries(6);
  SessionTrace t = s.Run(queries);
  EXPECT_EQ(t.records.size(), 5u);
  EXPECT_EQ(t.status.code(), absl::StatusCode::kResourceExhausted);
  EXPECT_EQ(s.ledger().queries_answered(), 5);
  EXPECT_LE(s.ledger().spent(), s.params().global_epsilon);
}

TEST(ProtocolSessionTest, EmptyBatchGivesEmptyTrace) {
  SmallWorld w;
  ProtocolSession s = Unwrap(ProtocolSession::Create(
      w.ensemble, w.public_model, w.Params(0.5), SessionOptions()));
  SessionTrace t = s.Run({});
  EXPECT_TRUE(t.records.empty());
  EXPECT_TRUE(t.status.ok());
}

TEST(ProtocolSessionTest, FixedSeedIsBitwiseReproducible) {
  SmallWorld w;
  SessionOptions opts;
  opts.seed = 77;
  std::vector<std::vector<TokenId>> queries(16, std::vector<TokenId>{1, 2});
  auto run = [&] {
    ProtocolSession s = Unwrap(ProtocolSession::Create(
        w.ensemble, w.public_model, w.Params(0.5), opts));
    return s.Run(queries);
  };
  SessionTrace a = run();
  SessionTrace b = run();
  ASSERT_EQ(a.records.size(), b.records.size());
  for (size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].subset, b.records[i].subset);
    EXPECT_EQ(a.records[i].lambdas, b.records[i].lambdas);
    EXPECT_EQ(a.records[i].aggregate, b.records[i].aggregate);
    EXPECT_EQ(a.records[i].sampled_token, b.records[i].sampled_token);
  }
}

TEST(ProtocolSessionTest, ModelFailureChargesNothing) {
  SmallWorld w;
  std::vector<ModelHandle> ensemble = w.ensemble;
  ensemble[0] = std::make_shared<TableModel>(4, std::nullopt);
  ProtocolSession s = Unwrap(ProtocolSession::Create(
      ensemble, w.public_model, w.Params(1.0), SessionOptions()));
  EXPECT_FALSE(s.Respond({}).ok());
  EXPECT_EQ(s.ledger().queries_answered(), 0);
}

TEST(ProtocolSessionTest, ResumedSessionKeepsCounting) {
  SmallWorld w;
  SessionOptions opts;
  opts.queries_already_answered = 15;
  ProtocolSession s = Unwrap(
      ProtocolSession::Create(w.ensemble, w.public_model, w.Params(0.5), opts));
  EXPECT_TRUE(s.Respond({}).ok());
  EXPECT_EQ(s.Respond({}).status().code(),
            absl::StatusCode::kResourceExhausted);
}

}  // namespace
}  // namespace pmixed
