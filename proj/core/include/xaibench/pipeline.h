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

// End-to-end benchmark: load -> standardize -> split -> train -> perturb ->
// explain (+ IRT) -> stability -> stats -> report.
//
// Every stage reads its inputs from and writes its outputs to
// <out>/artifacts, so running the stages one by one produces the same files
// as RunAll. Stage seeds derive from (seed, stage, model, level, explainer)
// labels, so a run over a subset reproduces the matching part of a larger
// run.
//
// Artifacts:
//   config.txt                      effective configuration (key = value)
//   dataset.json                    dataset summary and standardization
//   train.csv, test.csv             standardized split
//   model_<model>.json              trained models
//   test_<level>.csv                perturbed test variants
//   ranks_<model>_<level>.json      one rank per configured explainer
//   exirt_<model>_<level>.json      exirt IRT fit and response matrix
//   responses_<model>_<level>.csv   the same response matrix as CSV
//   reliability_<model>_<level>.json, icc_<model>_<level>.csv
//   stability.json, metrics.json, stats.json

#ifndef XAIBENCH_PIPELINE_H_
#define XAIBENCH_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "xaibench/config.h"
#include "xaibench/error.h"
#include "xaibench/irt.h"
#include "xaibench/report.h"

namespace xaibench {

// Wraps an error with the stage it came from. Its what() reads
// "<stage>: <cause>".
class StageError : public Failure {
 public:
  StageError(std::string_view stage, std::string_view cause);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

std::filesystem::path ArtifactDir(const RunConfig& config);

// Seed of one stage cell; empty labels are skipped.
uint64_t StageSeed(uint64_t master, std::string_view stage,
                   std::string_view model = "", std::string_view level = "",
                   std::string_view explainer = "");

void RunTrainStage(const RunConfig& config);
void RunPerturbStage(const RunConfig& config);
void RunExplainStage(const RunConfig& config);
void RunIrtStage(const RunConfig& config);
void RunStabilityStage(const RunConfig& config);
void RunStatsStage(const RunConfig& config);
// Builds the report from the artifacts and writes it into config.out.
RunReport RunReportStage(const RunConfig& config);

// All stages in order.
RunReport RunAll(const RunConfig& config);

// Reads <out>/artifacts/config.txt over `base` when present.
RunConfig WithSavedConfig(const std::filesystem::path& out, RunConfig base = {});

// Fits a 3PL model to a response-matrix CSV (header "respondent,<item
// ids...>", one 0/1 row per respondent).
ResponseMatrix LoadResponseCsv(const std::filesystem::path& path);
std::string ResponseCsv(const ResponseMatrix& responses);

}  // namespace xaibench

#endif  // XAIBENCH_PIPELINE_H_
