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

// SVG charts and the consolidated run report.
//
// Output layout written by WriteReport:
//   report.json  metrics.csv  ranks.csv  stability.csv  nemenyi.csv
//   icc_<model>_<level>.svg  bump_<explainer>_<model>.svg  heatmap.svg
// where <level> is the perturbation percentage ("0", "4", "10", ...).

#ifndef XAIBENCH_REPORT_H_
#define XAIBENCH_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xaibench/explainers.h"
#include "xaibench/irt.h"
#include "xaibench/metrics.h"
#include "xaibench/models.h"
#include "xaibench/stability.h"
#include "xaibench/stats.h"

namespace xaibench {

inline constexpr std::string_view kPositiveColor = "#2ca02c";
inline constexpr std::string_view kNegativeColor = "#d62728";
inline constexpr std::string_view kAverageColor = "#000000";

// Green polyline per item with a > 0, red for a < 0, a thick black pointwise
// average and the mean parameters printed to 2 decimals. Throws
// InvalidArgument on an empty list or mismatched grids.
std::string RenderIccSvg(std::span<const IccCurve> curves,
                         const ReliabilitySummary& summary,
                         std::string_view title = "");

// One polyline per feature across the perturbation columns, position 1 on
// top. With a record, each column shows its rho and the title its sum.
std::string RenderBumpSvg(std::span<const BumpRow> table,
                          const std::optional<StabilityRecord>& record,
                          std::string_view title = "");

// k x k grid, darker for smaller p, cells labelled to 2 decimals.
std::string RenderHeatmapSvg(const PosthocMatrix& matrix);

// "original" for 0, otherwise the percentage, e.g. "4%".
std::string LevelLabel(double fraction);
// Percentage without the sign, used in file names: "0", "4", "10".
std::string LevelSlug(double fraction);
// "gbt: original", "mlp: 10%".
std::string TreatmentLabel(ModelKind model, double fraction);

struct DatasetSummary {
  std::string source;
  size_t rows = 0;
  size_t features = 0;
  size_t negatives = 0;
  size_t positives = 0;
  size_t train_rows = 0;
  size_t test_rows = 0;
  std::vector<std::string> feature_names;

  friend bool operator==(const DatasetSummary&, const DatasetSummary&) = default;
};

struct ModelSummary {
  ModelKind model = ModelKind::kGbt;
  std::string hyperparameters;
  double cv_auc = 0.0;
  uint64_t seed = 0;

  friend bool operator==(const ModelSummary&, const ModelSummary&) = default;
};

struct MetricEntry {
  ModelKind model = ModelKind::kGbt;
  double fraction = 0.0;
  MetricReport metrics;

  friend bool operator==(const MetricEntry&, const MetricEntry&) = default;
};

// Reliability of one model at one perturbation level, from its exirt fit.
struct ReliabilityEntry {
  ModelKind model = ModelKind::kGbt;
  double fraction = 0.0;
  ReliabilitySummary summary;
  ItemParameters items;
  std::vector<std::string> item_ids;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;

  friend bool operator==(const ReliabilityEntry&, const ReliabilityEntry&) = default;
};

struct RunReport {
  // Effective configuration as key = value pairs.
  std::vector<std::pair<std::string, std::string>> config;
  uint64_t seed = 0;
  std::vector<ModelKind> models;
  std::vector<ExplainerKind> explainers;
  std::vector<double> levels;

  DatasetSummary dataset;
  std::vector<ModelSummary> trained;
  std::vector<MetricEntry> metrics;
  std::vector<ReliabilityEntry> reliability;
  std::vector<RelevanceRank> ranks;
  std::vector<StabilityRecord> stability;
  std::vector<ExplainerKind> stability_order;
  // Present when there are at least two treatments.
  std::optional<MeasurementTable> measurements;
  std::optional<FriedmanResult> friedman;
  std::optional<PosthocMatrix> nemenyi;
};

// Checks that every (model, level) metric and reliability slot, every
// (explainer, model, level) rank and every (explainer, model) stability
// record appears exactly once. Reliability slots exist only when exirt is
// configured, stability slots only with a nonzero level. Throws
// InvalidArgument naming the first bad slot.
void ValidateReport(const RunReport& report);

std::string ReportJson(const RunReport& report);
std::string MetricsCsv(const RunReport& report);
std::string RanksCsv(std::span<const RelevanceRank> ranks);
std::string StabilityCsv(std::span<const StabilityRecord> records);
std::string PosthocCsv(const PosthocMatrix& matrix);

// Validates, then writes the layout above into `directory` (created if
// needed). Throws Failure when a file cannot be written.
void WriteReport(const RunReport& report, const std::filesystem::path& directory);

}  // namespace xaibench

#endif  // XAIBENCH_REPORT_H_
