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
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "xaibench/error.h"
#include "xaibench/irt.h"
#include "xaibench/random.h"

namespace xaibench {
namespace {

using ::xaibench::testing::Correlation;
using ::xaibench::testing::SimulateIrt;

TEST(PCorrectTest, KnownValues) {
  EXPECT_NEAR(PCorrect(1.54, -2.18, 0.14, 0.0), 0.9711, 1e-3);
  for (double c : {0.0, 0.1, 0.37}) {
    EXPECT_DOUBLE_EQ(PCorrect(1.3, 0.4, c, 0.4), c + (1 - c) / 2);
  }
}

TEST(PCorrectTest, SaturatesWithoutOverflow) {
  EXPECT_DOUBLE_EQ(PCorrect(4, -6, 0.2, 1e300), 1.0);
  EXPECT_DOUBLE_EQ(PCorrect(4, 6, 0.2, -1e300), 0.2);
  EXPECT_TRUE(std::isfinite(PCorrect(-4, 0, 0.1, 1e308)));
}

TEST(ResponseMatrixTest, ValidatesShapeAndEntries) {
  EXPECT_THROW(ResponseMatrix(1, 2, {1, 0}, {"r"}, {"a", "b"}), InvalidArgument);
  EXPECT_THROW(ResponseMatrix(2, 2, {1, 0, 2, 1}, {"r", "s"}, {"a", "b"}),
               InvalidArgument);
  EXPECT_THROW(ResponseMatrix(2, 2, {1, 0, 1}, {"r", "s"}, {"a", "b"}),
               InvalidArgument);
  const ResponseMatrix m(2, 3, {1, 0, 1, 1, 1, 1}, {"r", "s"}, {"a", "b", "c"});
  EXPECT_EQ(m.RawScore(0), 2u);
  EXPECT_EQ(m.RawScore(1), 3u);
}

TEST(ResponseMatrixTest, CorrectWhenThresholdedPredictionMatchesLabel) {
  const Dataset test(Matrix(3, 1), {1, 0, 1}, {"x"});
  const ResponseMatrix m = ResponseMatrixFromPredictions(
      {{0.9, 0.2, 0.4}, {0.1, 0.6, 0.5}}, {"good", "bad"}, test);
  EXPECT_EQ(std::vector<uint8_t>(m.respondent_row(0).begin(), m.respondent_row(0).end()),
            (std::vector<uint8_t>{1, 1, 0}));
  EXPECT_EQ(std::vector<uint8_t>(m.respondent_row(1).begin(), m.respondent_row(1).end()),
            (std::vector<uint8_t>{0, 0, 1}));
  EXPECT_EQ(m.item_ids(), (std::vector<std::string>{"i0", "i1", "i2"}));
}

TEST(Fit3plTest, RecoversSimulatedParameters) {
  const auto sim = SimulateIrt(200, 100, 42);
  const IrtFit fit = Fit3pl(sim.responses);
  EXPECT_GE(Correlation(fit.abilities.theta, sim.theta), 0.85);
  double abs_b = 0.0;
  size_t sign_ok = 0;
  for (size_t i = 0; i < 100; ++i) {
    abs_b += std::abs(fit.items.b[i] - sim.items.b[i]) / 100;
    sign_ok += (fit.items.a[i] > 0) == (sim.items.a[i] > 0);
  }
  EXPECT_LE(abs_b, 0.5);
  EXPECT_GE(sign_ok, 80u);
  ASSERT_GE(fit.trace.size(), 2u);
  for (size_t k = 1; k < fit.trace.size(); ++k) {
    EXPECT_GE(fit.trace[k], fit.trace[k - 1]);
  }
}

TEST(Fit3plTest, ParametersStayInBoundsAndScaleIsStandard) {
  const auto sim = SimulateIrt(60, 40, 3);
  const IrtFit fit = Fit3pl(sim.responses);
  for (size_t i = 0; i < 40; ++i) {
    EXPECT_GE(fit.items.a[i], kMinDiscrimination);
    EXPECT_LE(fit.items.a[i], kMaxDiscrimination);
    EXPECT_GE(fit.items.b[i], kMinDifficulty);
    EXPECT_LE(fit.items.b[i], kMaxDifficulty);
    EXPECT_GE(fit.items.c[i], kMinGuessing);
    EXPECT_LE(fit.items.c[i], kMaxGuessing);
  }
  double mean = 0.0;
  for (double t : fit.abilities.theta) {
    EXPECT_GE(t, kMinAbility);
    EXPECT_LE(t, kMaxAbility);
    mean += t / 60;
  }
  EXPECT_NEAR(mean, 0.0, 0.05);
  EXPECT_DOUBLE_EQ(fit.log_likelihood,
                   PenalizedLogLikelihood(sim.responses, fit.items, fit.abilities));
}

TEST(Fit3plTest, WithoutStandardizationLikelihoodIsLastTraceValue) {
  const auto sim = SimulateIrt(40, 30, 4);
  IrtFitOptions options;
  options.standardize_abilities = false;
  const IrtFit fit = Fit3pl(sim.responses, options);
  EXPECT_EQ(fit.log_likelihood, fit.trace.back());
  EXPECT_EQ(fit.trace.size(), static_cast<size_t>(fit.iterations) + 1);
}

TEST(Fit3plTest, IdenticalResponseRowsGetEqualAbility) {
  std::vector<uint8_t> u = {1, 1, 0, 1, 0, 1, 1, 0, 1, 0,
                            0, 1, 0, 0, 0, 1, 1, 1, 1, 0};
  const ResponseMatrix m(4, 5, u, {"a", "b", "c", "d"},
                         {"i0", "i1", "i2", "i3", "i4"});
  const IrtFit fit = Fit3pl(m);
  EXPECT_EQ(fit.abilities.theta[0], fit.abilities.theta[1]);
}

TEST(Fit3plTest, IsDeterministic) {
  const auto sim = SimulateIrt(50, 20, 8);
  const IrtFit a = Fit3pl(sim.responses);
  const IrtFit b = Fit3pl(sim.responses);
  EXPECT_EQ(a.items, b.items);
  EXPECT_EQ(a.abilities, b.abilities);
}

TEST(EstimateAbilitiesTest, MoreCorrectAnswersNeverLowerAbility) {
  ItemParameters items{{1, 1, 1}, {-1, 0, 1}, {0.1, 0.1, 0.1}};
  const ResponseMatrix m(4, 3, {0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 1, 1},
                         {"r0", "r1", "r2", "r3"}, {"a", "b", "c"});
  const Abilities ab = EstimateAbilities(m, items);
  for (size_t r = 1; r < 4; ++r) EXPECT_GT(ab.theta[r], ab.theta[r - 1]);
}

TEST(IccTest, CurvesAreBoundedAndMonotone) {
  ItemParameters items{{1.5, -0.8, 0.0}, {0.0, 1.0, -1.0}, {0.2, 0.1, 0.3}};
  const auto grid = ThetaGrid();
  ASSERT_EQ(grid.size(), 161u);
  EXPECT_EQ(grid.front(), -4.0);
  EXPECT_EQ(grid.back(), 4.0);
  const auto curves = Icc(items, grid, std::vector<std::string>{"p", "n", "z"});
  ASSERT_EQ(curves.size(), 3u);
  EXPECT_FALSE(curves[0].negative_discrimination);
  EXPECT_TRUE(curves[1].negative_discrimination);
  for (size_t i = 0; i < 3; ++i) {
    for (size_t g = 0; g < grid.size(); ++g) {
      EXPECT_GE(curves[i].p[g], items.c[i]);
      EXPECT_LT(curves[i].p[g], 1.0);
      if (g == 0) continue;
      if (items.a[i] > 0) EXPECT_GT(curves[i].p[g], curves[i].p[g - 1]);
      if (items.a[i] < 0) EXPECT_LT(curves[i].p[g], curves[i].p[g - 1]);
      if (items.a[i] == 0) EXPECT_EQ(curves[i].p[g], curves[i].p[g - 1]);
    }
  }
  const auto avg = PointwiseAverage(curves);
  for (size_t g = 0; g < grid.size(); ++g) {
    EXPECT_NEAR(avg[g], (curves[0].p[g] + curves[1].p[g] + curves[2].p[g]) / 3,
                1e-15);
  }
  const std::vector<double> bad = {1.0, 0.0};
  EXPECT_THROW(Icc(items, bad), InvalidArgument);
}

TEST(IccTest, MeanParameterCurveOfIdenticalItemsIsTheirCurve) {
  ItemParameters items{{1.2, 1.2}, {0.5, 0.5}, {0.2, 0.2}};
  const auto grid = ThetaGrid(9);
  const auto mean_curve = MeanParameterCurve(items, grid);
  const auto curves = Icc(items, grid);
  for (size_t g = 0; g < grid.size(); ++g) {
    EXPECT_DOUBLE_EQ(mean_curve[g], curves[0].p[g]);
  }
}

TEST(SummarizeTest, AveragesAndCountsNegativeItems) {
  ItemParameters items{{1.0, -0.5, 2.0}, {0.0, 1.0, 2.0}, {0.1, 0.2, 0.3}};
  const ReliabilitySummary s = Summarize(items, Abilities{{-1.0, 1.0, 3.0}});
  EXPECT_DOUBLE_EQ(s.mean_discrimination, 2.5 / 3);
  EXPECT_DOUBLE_EQ(s.mean_difficulty, 1.0);
  EXPECT_NEAR(s.mean_guessing, 0.2, 1e-15);
  EXPECT_DOUBLE_EQ(s.mean_ability, 1.0);
  EXPECT_EQ(s.negative_item_count, 1u);
  EXPECT_EQ(s.item_count, 3u);
}

ReliabilitySummary Triple(double a, double b, double c) {
  ReliabilitySummary s;
  s.mean_discrimination = a;
  s.mean_difficulty = b;
  s.mean_guessing = c;
  return s;
}

TEST(CompareReliabilityTest, ReferenceTriples) {
  const auto gbt = Triple(1.54, -2.18, 0.14);
  const auto mlp = Triple(1.75, -1.77, 0.18);
  EXPECT_EQ(CompareReliability(gbt, mlp), ReliabilityVerdict::kFirstMoreReliable);
  // Discrimination and guessing favour the second by small margins; the
  // much larger difficulty margin favours the first.
  const auto knn = Triple(1.52, -1.82, 0.21);
  const auto cart = Triple(1.58, -0.95, 0.14);
  EXPECT_EQ(CompareReliability(knn, cart), ReliabilityVerdict::kAmbiguous);
}

TEST(CompareReliabilityTest, RuleProperties) {
  const auto base = Triple(1.0, 0.0, 0.2);
  EXPECT_EQ(CompareReliability(base, base), ReliabilityVerdict::kAmbiguous);
  // One vote each plus an abstention.
  EXPECT_EQ(CompareReliability(Triple(1.1, 0.0, 0.3), base),
            ReliabilityVerdict::kAmbiguous);
  // A large dissent blocks a small majority.
  EXPECT_EQ(CompareReliability(Triple(1.01, -0.01, 0.5), base),
            ReliabilityVerdict::kAmbiguous);
  // A dissent below the tie epsilon never blocks.
  EXPECT_EQ(CompareReliability(Triple(1.01, -0.01, 0.24), base),
            ReliabilityVerdict::kFirstMoreReliable);
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const auto x = Triple(rng.Uniform(0, 2), rng.Uniform(-2, 2), rng.Uniform(0, .5));
    const auto y = Triple(rng.Uniform(0, 2), rng.Uniform(-2, 2), rng.Uniform(0, .5));
    const auto forward = CompareReliability(x, y);
    const auto backward = CompareReliability(y, x);
    if (forward == ReliabilityVerdict::kAmbiguous) {
      EXPECT_EQ(backward, ReliabilityVerdict::kAmbiguous);
    } else {
      EXPECT_NE(forward, backward);
      EXPECT_NE(backward, ReliabilityVerdict::kAmbiguous);
    }
  }
}

TEST(CompareReliabilityTest, AbilityVoteIsOptional) {
  auto x = Triple(1.0, 0.0, 0.2);
  auto y = x;
  x.mean_ability = 1.0;
  EXPECT_EQ(CompareReliability(x, y), ReliabilityVerdict::kAmbiguous);
  CompareOptions options;
  options.use_ability = true;
  EXPECT_EQ(CompareReliability(x, y, options),
            ReliabilityVerdict::kFirstMoreReliable);
}

}  // namespace
}  // namespace xaibench
