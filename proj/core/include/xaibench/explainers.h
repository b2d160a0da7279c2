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

// Global feature-relevance rankings.
//
//   dalex   reflect a feature about its mean, measure the ROC AUC loss
//   eli5    shuffle a feature, measure the accuracy loss (mean decrease
//           accuracy)
//   lofo    drop a feature, retrain per fold, measure the ROC AUC loss
//   shap    kernel Shapley values, mean |phi| over instances
//   skater  shuffle a feature, measure the change in prediction entropy
//   exirt   shuffle a feature, measure the IRT ability lost by the model
//
// Every randomized step draws from a stream derived from (seed, method,
// feature), so results do not depend on evaluation order.

#ifndef XAIBENCH_EXPLAINERS_H_
#define XAIBENCH_EXPLAINERS_H_

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xaibench/data.h"
#include "xaibench/irt.h"
#include "xaibench/models.h"

namespace xaibench {

enum class ExplainerKind { kDalex, kEli5, kExirt, kLofo, kShap, kSkater };

inline constexpr std::array<ExplainerKind, 6> kAllExplainerKinds = {
    ExplainerKind::kDalex, ExplainerKind::kEli5, ExplainerKind::kExirt,
    ExplainerKind::kLofo,  ExplainerKind::kShap, ExplainerKind::kSkater};

std::string_view ToString(ExplainerKind kind);
ExplainerKind ParseExplainerKind(std::string_view name);

struct RelevanceRank {
  ExplainerKind explainer = ExplainerKind::kShap;
  ModelKind model_kind = ModelKind::kGbt;
  double perturbation_fraction = 0.0;
  // Most relevant first. A permutation of the dataset's feature names.
  std::vector<std::string> ordered_features;
  // Non-increasing, aligned with ordered_features.
  std::vector<double> scores;
  // Spread of the per-repetition (or per-fold) scores, aligned likewise.
  std::vector<double> score_stddev;

  size_t size() const { return ordered_features.size(); }
  // 1-based position of `feature`; throws if absent.
  size_t PositionOf(std::string_view feature) const;

  friend bool operator==(const RelevanceRank&, const RelevanceRank&) = default;
};

// Orders features by descending score; equal scores keep ascending feature
// index. `stddev` may be empty.
RelevanceRank MakeRank(ExplainerKind explainer,
                       std::span<const std::string> feature_names,
                       std::span<const double> scores,
                       std::span<const double> stddev = {});

// Replaces the scoring rule of the exirt method. Receives the fit and the
// respondent indices of the unmodified model and of the feature's probe.
using ExirtScoreHook =
    std::function<double(const IrtFit& fit, size_t original, size_t probe)>;

struct ExplainerConfig {
  // Shuffles / bootstrap resamples per feature (dalex, eli5, skater).
  int repetitions = 10;
  // Coalitions per instance when kernel Shapley samples.
  size_t coalition_budget = 2048;
  // Kernel Shapley enumerates every coalition when 2^M <= 2^this.
  size_t exact_max_features = 12;
  // Extra exirt respondents probed on resampled copies of the test set.
  int bootstrap_respondents = 20;
  int lofo_folds = 4;
  uint64_t seed = 0;
  IrtFitOptions irt;
  // Empty = ability drop.
  ExirtScoreHook exirt_score;
};

RelevanceRank ExplainDalexStyle(const Classifier& model, const Dataset& test,
                                const ExplainerConfig& config);

RelevanceRank ExplainEli5Style(const Classifier& model, const Dataset& test,
                               const ExplainerConfig& config);

// Stratified config.lofo_folds-fold cross-validation over `data`, refitting
// `model`'s hyperparameters with and without each feature. With a single
// feature the reduced model predicts the fold's training prior.
RelevanceRank ExplainLofoStyle(const TrainedModel& model, const Dataset& data,
                               const ExplainerConfig& config);

// Kernel Shapley values of one instance: coalitions are weighted by the
// Shapley kernel and solved by constrained weighted least squares, absent
// features taking the `reference` value. Exact (all coalitions) when
// M <= config.exact_max_features, otherwise config.coalition_budget sampled
// coalitions. The values always sum to f(x) - f(reference).
std::vector<double> KernelShapValues(const Classifier& model,
                                     std::span<const double> instance,
                                     std::span<const double> reference,
                                     const ExplainerConfig& config,
                                     uint64_t seed);

// Global score = mean |phi| over the rows of `test`.
RelevanceRank ExplainKernelShap(const Classifier& model, const Dataset& test,
                                std::span<const double> reference,
                                const ExplainerConfig& config);

// Column means of `background`, the default kernel Shapley reference.
std::vector<double> ColumnMeans(const Dataset& background);

RelevanceRank ExplainSkaterStyle(const Classifier& model, const Dataset& test,
                                 const ExplainerConfig& config);

struct ExirtResult {
  RelevanceRank rank;
  ResponseMatrix responses;
  IrtFit fit;
};

// Respondent pool: the model as is, the model with each feature shuffled,
// and config.bootstrap_respondents probes where each cell is replaced, with
// probability 0.5 * (b + 1) / B, by the same column's value from a random
// row. The pool is scored by a 3PL fit; relevance = ability(original) -
// ability(feature shuffled).
ExirtResult ExplainExirt(const Classifier& model, const Dataset& test,
                         const ExplainerConfig& config);

// Binary entropy in bits.
double BinaryEntropy(double p);

}  // namespace xaibench

#endif  // XAIBENCH_EXPLAINERS_H_
