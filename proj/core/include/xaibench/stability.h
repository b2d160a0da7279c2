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

// Rank stability under perturbation: Spearman correlation against the
// unperturbed rank, summed over perturbation levels.

#ifndef XAIBENCH_STABILITY_H_
#define XAIBENCH_STABILITY_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "xaibench/explainers.h"
#include "xaibench/models.h"

namespace xaibench {

struct StabilityRecord {
  ExplainerKind explainer = ExplainerKind::kShap;
  ModelKind model_kind = ModelKind::kGbt;
  // Nonzero perturbation fraction -> rho against the baseline rank.
  std::map<double, double> rho_by_fraction;
  double sum = 0.0;

  friend bool operator==(const StabilityRecord&, const StabilityRecord&) = default;
};

// rho = 1 - 6 sum(d^2) / (n (n^2 - 1)) over position differences. Both
// ranks must order the same feature set; n = 1 gives 1.
double Spearman(std::span<const std::string> order_a,
                std::span<const std::string> order_b);
double Spearman(const RelevanceRank& a, const RelevanceRank& b);

// Correlates each perturbed rank with `baseline`. Every fraction in
// `required_fractions` must be present in `perturbed` (InvalidArgument
// otherwise); fractions are matched within 1e-12.
StabilityRecord StabilitySum(const RelevanceRank& baseline,
                             std::span<const RelevanceRank> perturbed,
                             std::span<const double> required_fractions);

struct BumpRow {
  double fraction = 0.0;
  std::string feature;
  size_t position = 0;  // 1-based

  friend bool operator==(const BumpRow&, const BumpRow&) = default;
};

// Long-form (fraction, feature, position) table sorted by fraction, then
// position. All ranks must share one feature set.
std::vector<BumpRow> BumpChartData(std::span<const RelevanceRank> ranks);

// Explainers by total sum over models, descending; ties by name.
std::vector<ExplainerKind> StabilityOrder(
    std::span<const StabilityRecord> records);

}  // namespace xaibench

#endif  // XAIBENCH_STABILITY_H_
