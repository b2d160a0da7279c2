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

#include "xaibench/stability.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "xaibench/error.h"

namespace xaibench {
namespace {

constexpr double kFractionTolerance = 1e-12;

std::unordered_map<std::string, size_t> Positions(
    std::span<const std::string> order) {
  std::unordered_map<std::string, size_t> pos;
  for (size_t i = 0; i < order.size(); ++i) {
    if (!pos.emplace(order[i], i).second) {
      throw InvalidArgument("rank lists feature '" + order[i] + "' twice");
    }
  }
  return pos;
}

}  // namespace

double Spearman(std::span<const std::string> order_a,
                std::span<const std::string> order_b) {
  if (order_a.size() != order_b.size() || order_a.empty()) {
    throw InvalidArgument("spearman: ranks have different feature sets");
  }
  const auto pos_b = Positions(order_b);
  Positions(order_a);
  const auto n = static_cast<double>(order_a.size());
  double d2 = 0.0;
  for (size_t i = 0; i < order_a.size(); ++i) {
    const auto it = pos_b.find(order_a[i]);
    if (it == pos_b.end()) {
      throw InvalidArgument("spearman: feature '" + order_a[i] +
                            "' missing from the second rank");
    }
    const double d = static_cast<double>(i) - static_cast<double>(it->second);
    d2 += d * d;
  }
  if (order_a.size() == 1) return 1.0;
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

double Spearman(const RelevanceRank& a, const RelevanceRank& b) {
  return Spearman(a.ordered_features, b.ordered_features);
}

StabilityRecord StabilitySum(const RelevanceRank& baseline,
                             std::span<const RelevanceRank> perturbed,
                             std::span<const double> required_fractions) {
  StabilityRecord record;
  record.explainer = baseline.explainer;
  record.model_kind = baseline.model_kind;
  for (const double fraction : required_fractions) {
    const auto it = std::find_if(
        perturbed.begin(), perturbed.end(), [&](const RelevanceRank& r) {
          return std::abs(r.perturbation_fraction - fraction) <=
                 kFractionTolerance;
        });
    if (it == perturbed.end()) {
      throw InvalidArgument("stability: no " + std::string(ToString(baseline.explainer)) +
                            "/" + std::string(ToString(baseline.model_kind)) +
                            " rank at fraction " + std::to_string(fraction));
    }
    const double rho = Spearman(baseline, *it);
    record.rho_by_fraction[fraction] = rho;
  }
  // Summed in ascending fraction order so the result is order independent.
  for (const auto& [fraction, rho] : record.rho_by_fraction) record.sum += rho;
  return record;
}

std::vector<BumpRow> BumpChartData(std::span<const RelevanceRank> ranks) {
  std::vector<BumpRow> rows;
  for (const RelevanceRank& rank : ranks) {
    Spearman(ranks[0], rank);  // throws on a feature-set mismatch
    for (size_t i = 0; i < rank.size(); ++i) {
      rows.push_back({rank.perturbation_fraction, rank.ordered_features[i], i + 1});
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const BumpRow& x, const BumpRow& y) {
                     if (x.fraction != y.fraction) return x.fraction < y.fraction;
                     return x.position < y.position;
                   });
  return rows;
}

std::vector<ExplainerKind> StabilityOrder(
    std::span<const StabilityRecord> records) {
  std::map<std::string_view, std::pair<ExplainerKind, double>> totals;
  for (const StabilityRecord& r : records) {
    auto& slot = totals.try_emplace(ToString(r.explainer), r.explainer, 0.0)
                     .first->second;
    slot.second += r.sum;
  }
  std::vector<std::pair<ExplainerKind, double>> sorted;
  for (const auto& [name, entry] : totals) sorted.push_back(entry);
  // `totals` is keyed by name, so a stable sort keeps ties alphabetical.
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  std::vector<ExplainerKind> order;
  for (const auto& entry : sorted) order.push_back(entry.first);
  return order;
}

}  // namespace xaibench
