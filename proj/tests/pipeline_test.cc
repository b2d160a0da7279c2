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

#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "pipeline_fixture.h"
#include "test_support.h"
#include "xaibench/pipeline.h"

namespace xaibench {
namespace {

using ::xaibench::testing::ReadFile;
using ::xaibench::testing::ScratchDir;
using ::xaibench::testing::SmallRunConfig;
using ::xaibench::testing::Snapshot;

TEST(PipelineTest, StagesComposeToRunAll) {
  ScratchDir dir("compose");
  RunConfig all = SmallRunConfig(dir.path());
  all.out = dir.path() / "all";
  const RunReport report = RunAll(all);
  EXPECT_EQ(report.ranks.size(), 6u * 2 * 2);
  EXPECT_EQ(report.metrics.size(), 2u * 2);
  EXPECT_EQ(report.reliability.size(), 2u * 2);
  EXPECT_EQ(report.stability.size(), 6u * 2);
  EXPECT_TRUE(report.nemenyi.has_value());
  const ResponseMatrix responses =
      LoadResponseCsv(ArtifactDir(all) / "responses_cart_10.csv");
  EXPECT_EQ(responses.num_respondents(), 1u + 4 + 4);  // original, features, resamples
  EXPECT_EQ(responses.num_items(), 48u);

  RunConfig staged = all;
  staged.out = dir.path() / "staged";
  RunTrainStage(staged);
  RunPerturbStage(staged);
  RunExplainStage(staged);
  RunIrtStage(staged);
  RunStabilityStage(staged);
  RunStatsStage(staged);
  RunReportStage(staged);
  EXPECT_EQ(Snapshot(all.out), Snapshot(staged.out));
}

TEST(PipelineTest, RepeatedRunsAreByteIdentical) {
  ScratchDir dir("repeat");
  RunConfig a = SmallRunConfig(dir.path());
  a.explainers = {ExplainerKind::kEli5, ExplainerKind::kExirt};
  a.out = dir.path() / "a";
  RunConfig b = a;
  b.out = dir.path() / "b";
  RunAll(a);
  RunAll(b);
  EXPECT_EQ(Snapshot(a.out), Snapshot(b.out));
  RunConfig c = a;
  c.seed = a.seed + 1;
  c.out = dir.path() / "c";
  RunAll(c);
  EXPECT_NE(ReadFile(a.out / "report.json"), ReadFile(c.out / "report.json"));
}

TEST(PipelineTest, ModelSubsetReproducesItsPartOfLargerRun) {
  ScratchDir dir("subset");
  RunConfig both = SmallRunConfig(dir.path());
  both.explainers = {ExplainerKind::kShap, ExplainerKind::kSkater};
  both.out = dir.path() / "both";
  RunConfig one = both;
  one.models = {ModelKind::kKnn};
  one.out = dir.path() / "one";
  RunAll(both);
  RunAll(one);
  for (const char* name : {"model_knn.json", "ranks_knn_0.json", "ranks_knn_10.json",
                           "test_10.csv"}) {
    EXPECT_EQ(ReadFile(ArtifactDir(both) / name), ReadFile(ArtifactDir(one) / name))
        << name;
  }
}

TEST(PipelineTest, MissingInputNamesProducingStage) {
  ScratchDir dir("missing");
  const RunConfig c = SmallRunConfig(dir.path());
  try {
    RunExplainStage(c);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "explain");
    EXPECT_NE(std::string(e.what()).find("train"), std::string::npos) << e.what();
  }
  EXPECT_THROW(RunReportStage(c), StageError);
}

TEST(PipelineTest, UnreadableDatasetFailsTrainStage) {
  ScratchDir dir("unreadable");
  RunConfig c = SmallRunConfig(dir.path());
  c.dataset = dir.path() / "absent.csv";
  try {
    RunTrainStage(c);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "train");
  }
}

TEST(PipelineTest, SavedConfigIsReloaded) {
  ScratchDir dir("saved");
  RunConfig c = SmallRunConfig(dir.path());
  c.seed = 123;
  RunTrainStage(c);
  const RunConfig back = WithSavedConfig(c.out);
  EXPECT_EQ(back.seed, 123u);
  EXPECT_EQ(back.models, c.models);
  EXPECT_EQ(back.levels, c.levels);
}

TEST(PipelineTest, StageSeedsSkipEmptyLabelsAndSeparateCells) {
  EXPECT_EQ(StageSeed(7, "perturb", "", "10"), StageSeed(7, "perturb", "10"));
  EXPECT_NE(StageSeed(7, "train", "gbt"), StageSeed(7, "train", "mlp"));
  EXPECT_NE(StageSeed(7, "explain", "gbt", "0", "shap"),
            StageSeed(7, "explain", "gbt", "4", "shap"));
  EXPECT_NE(StageSeed(7, "split"), StageSeed(8, "split"));
}

TEST(ResponseCsvTest, RoundTrips) {
  ScratchDir dir("responses");
  const ResponseMatrix m(3, 2, {1, 0, 0, 1, 1, 1}, {"r0", "r1", "r2"}, {"q1", "q2"});
  const auto path = dir.path() / "u.csv";
  {
    std::ofstream out(path);
    out << ResponseCsv(m);
  }
  EXPECT_EQ(LoadResponseCsv(path), m);
}

}  // namespace
}  // namespace xaibench
