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

#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.h"
#include "xaibench/config.h"
#include "xaibench/error.h"

namespace xaibench {
namespace {

std::string MessageOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}

TEST(ParseLevelsTest, AcceptsPercentAndFraction) {
  EXPECT_EQ(ParseLevels("0,4%,6%,10%"), (std::vector<double>{0, 0.04, 0.06, 0.1}));
  EXPECT_EQ(ParseLevels("0.1, 0, 0.04, 4%"), (std::vector<double>{0, 0.04, 0.1}));
  EXPECT_THROW(ParseLevels("0,150%"), InvalidArgument);
  EXPECT_THROW(ParseLevels("0,x"), InvalidArgument);
  EXPECT_THROW(ParseLevels(""), InvalidArgument);
}

TEST(ParseConfigTextTest, AppliesKeysAndSkipsComments) {
  const RunConfig c = ParseConfigText(
      "# benchmark\n"
      "dataset = data/x.csv\n"
      "\n"
      "seed = 11   # trailing\n"
      "models = cart, knn\n"
      "explainers = shap\n"
      "levels = 0,10%\n"
      "perturbation-kind = noise\n"
      "knn-k = 1,9\n"
      "repetitions = 3\n"
      "irt-tolerance = 0.001\n",
      "test.conf");
  EXPECT_EQ(c.dataset, "data/x.csv");
  EXPECT_EQ(c.seed, 11u);
  EXPECT_EQ(c.models, (std::vector<ModelKind>{ModelKind::kCart, ModelKind::kKnn}));
  EXPECT_EQ(c.explainers, (std::vector<ExplainerKind>{ExplainerKind::kShap}));
  EXPECT_EQ(c.levels, (std::vector<double>{0.0, 0.1}));
  EXPECT_EQ(c.perturbation_kind, PerturbationKind::kNoise);
  EXPECT_EQ(c.knn_k, (std::vector<int>{1, 9}));
  EXPECT_EQ(c.explainer.repetitions, 3);
  EXPECT_EQ(c.explainer.irt.tolerance, 0.001);
  EXPECT_EQ(c.gbt_rounds, RunConfig{}.gbt_rounds);
}

TEST(ParseConfigTextTest, ErrorsNameSourceLineAndKey) {
  EXPECT_NE(MessageOf([] { ParseConfigText("seed = 1\nbogus = 2\n", "f.conf"); })
                .find("f.conf:2"),
            std::string::npos);
  EXPECT_NE(MessageOf([] { ParseConfigText("seed = -1\n", "f.conf"); }).find("seed"),
            std::string::npos);
  EXPECT_NE(MessageOf([] { ParseConfigText("no equals sign\n", "f.conf"); })
                .find("f.conf:1"),
            std::string::npos);
  EXPECT_THROW(ParseConfigText("models = svm\n", "f"), InvalidArgument);
  EXPECT_THROW(ParseConfigText("train-fraction = abc\n", "f"), InvalidArgument);
}

TEST(ConfigEntriesTest, EchoRoundTripsThroughParser) {
  RunConfig c;
  c.dataset = "d.csv";
  c.seed = 99;
  c.levels = {0.0, 0.125};
  c.models = {ModelKind::kMlp};
  c.mlp_learning_rate = 0.003;
  c.explainer.coalition_budget = 512;
  std::string text;
  for (const auto& [key, value] : ConfigEntries(c)) text += key + " = " + value + "\n";
  const RunConfig back = ParseConfigText(text, "echo");
  std::string again;
  for (const auto& [key, value] : ConfigEntries(back)) again += key + " = " + value + "\n";
  EXPECT_EQ(text, again);
  EXPECT_EQ(back.levels, c.levels);
  EXPECT_EQ(back.mlp_learning_rate, c.mlp_learning_rate);
  for (const auto& [key, value] : ConfigEntries(c)) EXPECT_NE(key, "out");
}

TEST(ConfigKeysTest, EveryKeyIsAccepted) {
  for (const auto key : ConfigKeys()) {
    RunConfig c;
    std::string value = "1";
    for (const auto& [k, v] : ConfigEntries(c)) {
      if (k == key) value = v;
    }
    if (key == "dataset" || key == "out") value = "x";
    EXPECT_NO_THROW(ApplyConfigValue(c, key, value)) << key;
  }
}

TEST(ValidateTest, RejectsUnusableCombinations) {
  RunConfig c;
  c.levels = {0.04, 0.1};
  EXPECT_THROW(c.Validate(), InvalidArgument);
  c = RunConfig{};
  c.models.clear();
  EXPECT_THROW(c.Validate(), InvalidArgument);
  c = RunConfig{};
  c.cv_folds = 1;
  EXPECT_THROW(c.Validate(), InvalidArgument);
  c = RunConfig{};
  c.train_fraction = 1.0;
  EXPECT_THROW(c.Validate(), InvalidArgument);
  EXPECT_NO_THROW(RunConfig{}.Validate());
}

TEST(LoadConfigFileTest, MissingFileIsInvalidArgument) {
  EXPECT_THROW(LoadConfigFile("/nonexistent/xaibench.conf"), InvalidArgument);
}

TEST(CvTest, GridIsFullCrossProduct) {
  RunConfig c;
  const CVConfig cv = c.Cv();
  EXPECT_EQ(cv.folds, 4);
  EXPECT_EQ(cv.gbt_grid.size(), 6u);
  EXPECT_EQ(cv.mlp_grid.size(), 3u);
  EXPECT_EQ(cv.cart_grid.size(), 4u);
  EXPECT_EQ(cv.knn_grid.size(), 4u);
}

}  // namespace
}  // namespace xaibench
