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

#include "xaibench/metrics.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "xaibench/error.h"

namespace xaibench {

double RocAuc(std::span<const int> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) {
    throw InvalidArgument("RocAuc: size mismatch");
  }
  const size_t n = labels.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });

  // Sum of (average) ranks of the positives.
  double positive_rank_sum = 0.0;
  double positives = 0.0;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double average_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        positive_rank_sum += average_rank;
        positives += 1.0;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(n) - positives;
  if (positives == 0.0 || negatives == 0.0) return 0.5;
  return (positive_rank_sum - positives * (positives + 1.0) / 2.0) /
         (positives * negatives);
}

double Accuracy(std::span<const int> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) {
    throw InvalidArgument("Accuracy: size mismatch");
  }
  if (labels.empty()) return 0.0;
  size_t correct = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    correct += (scores[i] >= kDecisionThreshold ? 1 : 0) == labels[i];
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

MetricReport ComputeMetrics(std::span<const int> labels,
                            std::span<const double> probabilities) {
  if (labels.size() != probabilities.size()) {
    throw InvalidArgument("ComputeMetrics: size mismatch");
  }
  double tp = 0, fp = 0, tn = 0, fn = 0;
  std::vector<double> predicted(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) {
    const bool positive = probabilities[i] >= kDecisionThreshold;
    predicted[i] = positive ? 1.0 : 0.0;
    if (positive) {
      (labels[i] == 1 ? tp : fp) += 1;
    } else {
      (labels[i] == 1 ? fn : tn) += 1;
    }
  }
  MetricReport report;
  const double total = tp + fp + tn + fn;
  report.accuracy = total > 0 ? (tp + tn) / total : 0.0;
  report.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  report.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  const double pr = report.precision + report.recall;
  report.f1 = pr > 0 ? 2.0 * report.precision * report.recall / pr : 0.0;
  report.roc_auc = RocAuc(labels, predicted);
  return report;
}

}  // namespace xaibench
