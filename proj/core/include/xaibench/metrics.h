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

#ifndef XAIBENCH_METRICS_H_
#define XAIBENCH_METRICS_H_

#include <span>

namespace xaibench {

inline constexpr double kDecisionThreshold = 0.5;

struct MetricReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double roc_auc = 0.0;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

// Mann-Whitney estimate of the area under the ROC curve: the probability that
// a random positive scores above a random negative, ties counted 1/2.
// Returns 0.5 when either class is absent.
double RocAuc(std::span<const int> labels, std::span<const double> scores);

// Share of rows where (score >= 0.5) == label.
double Accuracy(std::span<const int> labels, std::span<const double> scores);

// Confusion-matrix metrics at threshold 0.5 with label 1 as the positive
// class. Precision/recall are 0 when their denominator is 0; F1 is 0 when
// precision + recall is 0.
//
// roc_auc is computed over the thresholded predictions, i.e. it equals
// (recall + specificity) / 2, the value reported when an AUC routine is fed
// hard labels. Use RocAuc() directly for the probability-ranking AUC.
MetricReport ComputeMetrics(std::span<const int> labels,
                            std::span<const double> probabilities);

}  // namespace xaibench

#endif  // XAIBENCH_METRICS_H_
