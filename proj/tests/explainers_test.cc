/*
 * Copyright 2026 The xaibench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "test_support.h"
#include "xaibench/error.h"
#include "xaibench/explainers.h"
#include "xaibench/metrics.h"
#include "xaibench/models.h"
#include "xaibench/random.h"

namespace xaibench {
namespace {

using ::xaibench::testing::AndDataset;
using ::xaibench::testing::BruteForceShapley;
using ::xaibench::testing::FunctionClassifier;
using ::xaibench::testing::Interacting;
using ::xaibench::testing::RandomPoint;
using ::xaibench::testing::UniformDataset;

TEST(KernelShapTest, ExactModeMatchesBruteForce) {
  Rng rng(1);
  for (size_t m : {1u, 2u, 3u, 5u, 8u}) {
    const auto model = Interacting(m);
    for (int t = 0; t < 5; ++t) {
      const auto x = RandomPoint(rng, m);
      const auto ref = RandomPoint(rng, m);
      const auto phi = KernelShapValues(model, x, ref, {}, 3);
      const auto expected = BruteForceShapley(model, x, ref);
      for (size_t j = 0; j < m; ++j) {
        EXPECT_NEAR(phi[j], expected[j], 1e-6) << "M=" << m << " j=" << j;
      }
    }
  }
}

TEST(KernelShapTest, EfficiencyOnFiftyInstances) {
  Rng rng(2);
  const size_t m = 6;
  const auto model = Interacting(m);
  const auto ref = RandomPoint(rng, m);
  for (int t = 0; t < 50; ++t) {
    const auto x = RandomPoint(rng, m);
    const auto phi = KernelShapValues(model, x, ref, {}, t);
    Matrix both = Matrix::FromRows({x, ref});
    const auto f = model.PredictProba(both);
    EXPECT_NEAR(std::accumulate(phi.begin(), phi.end(), 0.0), f[0] - f[1], 1e-6);
  }
}

TEST(KernelShapTest, SampledModeIsCloseToExact) {
  Rng rng(3);
  const size_t m = 13;
  const auto model = Interacting(m);
  ExplainerConfig sampled;
  sampled.coalition_budget = 2048;
  ExplainerConfig exact;
  exact.exact_max_features = m;
  for (int t = 0; t < 5; ++t) {
    const auto x = RandomPoint(rng, m);
    const auto ref = RandomPoint(rng, m);
    const auto approx = KernelShapValues(model, x, ref, sampled, 100 + t);
    const auto truth = KernelShapValues(model, x, ref, exact, 0);
    double sum = 0.0;
    for (size_t j = 0; j < m; ++j) {
      EXPECT_NEAR(approx[j], truth[j], 0.05) << "j=" << j;
      sum += approx[j];
    }
    const auto f = model.PredictProba(Matrix::FromRows({x, ref}));
    EXPECT_NEAR(sum, f[0] - f[1], 1e-6);
  }
}

TEST(KernelShapTest, DummyFeatureGetsExactZero) {
  const FunctionClassifier model(4, [](std::span<const double> x) {
    return 1.0 / (1.0 + std::exp(-(x[0] * x[1] + x[3])));
  });
  const std::vector<double> x = {1.0, -0.5, 9.0, 0.3};
  const std::vector<double> ref = {0.0, 0.0, 0.0, 0.0};
  EXPECT_EQ(KernelShapValues(model, x, ref, {}, 0)[2], 0.0);
}

TEST(KernelShapTest, SampledModeNeedsBudget) {
  const auto model = Interacting(13);
  const std::vector<double> x(13, 1.0), ref(13, 0.0);
  ExplainerConfig config;
  config.coalition_budget = 14;
  EXPECT_THROW(KernelShapValues(model, x, ref, config, 0), InvalidArgument);
  config.coalition_budget = 15;
  EXPECT_NO_THROW(KernelShapValues(model, x, ref, config, 0));
}

TEST(MakeRankTest, OrdersDescendingWithIndexTieBreak) {
  const std::vector<std::string> names = {"a", "b", "c", "d"};
  const std::vector<double> scores = {0.1, 0.5, 0.1, 0.7};
  const RelevanceRank r = MakeRank(ExplainerKind::kEli5, names, scores);
  EXPECT_EQ(r.ordered_features, (std::vector<std::string>{"d", "b", "a", "c"}));
  EXPECT_EQ(r.scores, (std::vector<double>{0.7, 0.5, 0.1, 0.1}));
  EXPECT_EQ(r.PositionOf("a"), 3u);
  EXPECT_THROW(r.PositionOf("z"), InvalidArgument);
}

TEST(ExplainerKindTest, NamesRoundTrip) {
  for (auto k : kAllExplainerKinds) EXPECT_EQ(ParseExplainerKind(ToString(k)), k);
  EXPECT_THROW(ParseExplainerKind("lime"), InvalidArgument);
}

TEST(BinaryEntropyTest, Values) {
  EXPECT_EQ(BinaryEntropy(0.0), 0.0);
  EXPECT_EQ(BinaryEntropy(1.0), 0.0);
  EXPECT_DOUBLE_EQ(BinaryEntropy(0.5), 1.0);
  EXPECT_DOUBLE_EQ(BinaryEntropy(0.25), BinaryEntropy(0.75));
}

class NullFeatureTest : public ::testing::Test {
 protected:
  void SetUp() override {
    model_ = Fit(CartParams{0, 1}, train_, 1);
    ASSERT_FALSE(std::get<CartState>(model_.state()).tree.UsesFeature(2));
    config_.seed = 4;
  }
  void ExpectNoiseLastAtZero(const RelevanceRank& r, double tolerance = 0.0) {
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r.ordered_features.back(), "x2");
    EXPECT_NEAR(r.scores.back(), 0.0, tolerance);
  }
  Dataset train_ = AndDataset(400, 3, 21);
  Dataset test_ = AndDataset(200, 3, 22);
  TrainedModel model_ = FitConstant(std::vector<int>{0, 1}, 3);
  ExplainerConfig config_;
};

TEST_F(NullFeatureTest, Dalex) { ExpectNoiseLastAtZero(ExplainDalexStyle(model_, test_, config_)); }
TEST_F(NullFeatureTest, Eli5) { ExpectNoiseLastAtZero(ExplainEli5Style(model_, test_, config_)); }
TEST_F(NullFeatureTest, Skater) { ExpectNoiseLastAtZero(ExplainSkaterStyle(model_, test_, config_)); }
TEST_F(NullFeatureTest, Lofo) {
  ExpectNoiseLastAtZero(ExplainLofoStyle(model_, test_, config_), 0.02);
}
TEST_F(NullFeatureTest, Shap) {
  ExpectNoiseLastAtZero(ExplainKernelShap(model_, test_, ColumnMeans(train_), config_));
}
TEST_F(NullFeatureTest, Exirt) {
  const ExirtResult result = ExplainExirt(model_, test_, config_);
  ExpectNoiseLastAtZero(result.rank);
  EXPECT_EQ(result.responses.num_respondents(),
            1 + 3 + static_cast<size_t>(config_.bootstrap_respondents));
  EXPECT_EQ(result.responses.num_items(), test_.num_rows());
}

TEST(ExplainersTest, SingleFeatureRankedFirst) {
  const Dataset d = UniformDataset(200, 1, 5, [](auto x) { return x[0] > 0; });
  // Soft outputs: a pure tree has zero prediction entropy everywhere.
  const TrainedModel m = Fit(GbtParams{20, 2, 0.1, 1.0}, d, 1);
  ExplainerConfig config;
  for (const RelevanceRank& r :
       {ExplainDalexStyle(m, d, config), ExplainEli5Style(m, d, config),
        ExplainSkaterStyle(m, d, config), ExplainLofoStyle(m, d, config),
        ExplainKernelShap(m, d, ColumnMeans(d), config),
        ExplainExirt(m, d, config).rank}) {
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r.ordered_features[0], "x0");
    EXPECT_GT(r.scores[0], 0.0) << ToString(r.explainer);
  }
}

TEST(ExplainersTest, DuplicateFeatureUnusedByModelScoresZero) {
  Dataset base = UniformDataset(300, 1, 6, [](auto x) { return x[0] > 0.2; });
  Matrix x(base.num_rows(), 2);
  for (size_t r = 0; r < base.num_rows(); ++r) {
    x(r, 0) = x(r, 1) = base.features()(r, 0);
  }
  const Dataset d(x, base.labels(), {"first", "copy"});
  const FunctionClassifier model(2, [](auto row) {
    return 1.0 / (1.0 + std::exp(-8.0 * (row[0] - 0.2)));
  });
  const RelevanceRank r = ExplainDalexStyle(model, d, {});
  EXPECT_EQ(r.ordered_features, (std::vector<std::string>{"first", "copy"}));
  EXPECT_GT(r.scores[0], 0.0);
  EXPECT_EQ(r.scores[1], 0.0);
}

TEST(ExplainersTest, Eli5FullShuffleOfPerfectFeatureFallsToChance) {
  const Dataset d = UniformDataset(2000, 1, 7, [](auto x) { return x[0] > 0; });
  const FunctionClassifier model(1, [](auto x) { return x[0] > 0 ? 1.0 : 0.0; });
  ExplainerConfig config;
  config.repetitions = 20;
  const RelevanceRank r = ExplainEli5Style(model, d, config);
  EXPECT_NEAR(r.scores[0], 1.0 - 0.5, 0.03);
}

TEST(ExplainersTest, Eli5MoreRepetitionsLowerVariance) {
  const Dataset d = AndDataset(150, 2, 8);
  const FunctionClassifier model(2, [](auto x) {
    return x[0] > 0 && x[1] > 0 ? 0.9 : 0.1;
  });
  auto spread = [&](int reps) {
    std::vector<double> s;
    for (uint64_t trial = 0; trial < 30; ++trial) {
      ExplainerConfig config;
      config.repetitions = reps;
      config.seed = 1000 + trial;
      const RelevanceRank r = ExplainEli5Style(model, d, config);
      s.push_back(r.scores[r.PositionOf("x0") - 1]);
    }
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / s.size();
    double ss = 0.0;
    for (double v : s) ss += (v - mean) * (v - mean);
    return std::pair{mean, ss / (s.size() - 1)};
  };
  const auto [mean1, var1] = spread(1);
  const auto [mean10, var10] = spread(10);
  EXPECT_LT(var10, var1);
  EXPECT_NEAR(mean1, mean10, 0.03);
}

TEST(ExplainersTest, SchemaMismatchThrows) {
  const Dataset d = AndDataset(50, 3, 9);
  const FunctionClassifier model(2, [](auto) { return 0.5; });
  EXPECT_THROW(ExplainDalexStyle(model, d, {}), InvalidArgument);
  EXPECT_THROW(ExplainEli5Style(model, d, {}), InvalidArgument);
  EXPECT_THROW(ExplainSkaterStyle(model, d, {}), InvalidArgument);
  EXPECT_THROW(ExplainExirt(model, d, {}), InvalidArgument);
  EXPECT_THROW(ExplainKernelShap(model, d, ColumnMeans(d), {}), InvalidArgument);
}

TEST(ExplainersTest, EqualSeedsGiveEqualRanks) {
  const Dataset train = AndDataset(200, 4, 10);
  const Dataset test = AndDataset(100, 4, 11);
  const TrainedModel m = Fit(GbtParams{30, 2, 0.1, 1.0}, train, 1);
  ExplainerConfig config;
  config.seed = 77;
  EXPECT_EQ(ExplainDalexStyle(m, test, config), ExplainDalexStyle(m, test, config));
  EXPECT_EQ(ExplainEli5Style(m, test, config), ExplainEli5Style(m, test, config));
  EXPECT_EQ(ExplainSkaterStyle(m, test, config), ExplainSkaterStyle(m, test, config));
  EXPECT_EQ(ExplainLofoStyle(m, test, config), ExplainLofoStyle(m, test, config));
  EXPECT_EQ(ExplainExirt(m, test, config).rank, ExplainExirt(m, test, config).rank);
}

TEST(ExplainersTest, RanksArePermutationsWithNonIncreasingScores) {
  const Dataset train = AndDataset(200, 5, 12);
  const Dataset test = AndDataset(100, 5, 13);
  const TrainedModel m = Fit(MlpParams{8, 40, 0.05, 1e-4}, train, 3);
  ExplainerConfig config;
  config.repetitions = 3;
  for (const RelevanceRank& r :
       {ExplainDalexStyle(m, test, config), ExplainEli5Style(m, test, config),
        ExplainSkaterStyle(m, test, config), ExplainLofoStyle(m, test, config),
        ExplainKernelShap(m, test, ColumnMeans(train), config),
        ExplainExirt(m, test, config).rank}) {
    std::vector<std::string> sorted = r.ordered_features;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, test.feature_names());
    for (size_t i = 1; i < r.size(); ++i) EXPECT_LE(r.scores[i], r.scores[i - 1]);
    EXPECT_EQ(r.score_stddev.size(), r.size());
  }
}

TEST(ExirtTest, ScoreHookReplacesAbilityDrop) {
  const Dataset train = AndDataset(200, 3, 14);
  const Dataset test = AndDataset(100, 3, 15);
  const TrainedModel m = Fit(CartParams{0, 1}, train, 1);
  ExplainerConfig config;
  config.exirt_score = [](const IrtFit&, size_t original, size_t probe) {
    return static_cast<double>(probe) - static_cast<double>(original);
  };
  const RelevanceRank r = ExplainExirt(m, test, config).rank;
  EXPECT_EQ(r.ordered_features, (std::vector<std::string>{"x2", "x1", "x0"}));
  EXPECT_EQ(r.scores, (std::vector<double>{3.0, 2.0, 1.0}));
}

}  // namespace
}  // namespace xaibench
