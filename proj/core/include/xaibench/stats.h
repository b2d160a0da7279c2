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

// Friedman rank test and Nemenyi post-hoc comparisons.

#ifndef XAIBENCH_STATS_H_
#define XAIBENCH_STATS_H_

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "xaibench/matrix.h"

namespace xaibench {

// Rows are blocks (e.g. metrics), columns are treatments (e.g. "gbt: 10%").
struct MeasurementTable {
  std::vector<std::string> blocks;
  std::vector<std::string> treatments;
  Matrix values;  // blocks x treatments

  // Throws InvalidArgument unless there are >= 2 blocks, >= 2 treatments,
  // matching label counts and finite values.
  void Validate() const;
};

struct FriedmanResult {
  double statistic = 0.0;
  double p_value = 1.0;
  // Mean within-block rank per treatment (1 = smallest value).
  std::vector<double> mean_ranks;

  friend bool operator==(const FriedmanResult&, const FriedmanResult&) = default;
};

struct PosthocMatrix {
  std::vector<std::string> labels;
  Matrix p;  // symmetric, unit diagonal

  friend bool operator==(const PosthocMatrix&, const PosthocMatrix&) = default;
};

// Average ranks (1-based) of `values`, ties sharing the mean rank.
std::vector<double> AverageRanks(std::span<const double> values);

// chi^2 = 12 / (n k (k + 1)) sum R_j^2 - 3 n (k + 1) over rank sums R_j,
// with p from the chi-square tail on k - 1 degrees of freedom.
FriedmanResult Friedman(const MeasurementTable& table);

// Pairwise p-values from the studentized range on mean-rank differences:
// q = |R_i - R_j| / sqrt(k (k + 1) / (6 n)), p = 1 - P(Q <= q sqrt(2)),
// infinite degrees of freedom.
PosthocMatrix Nemenyi(const MeasurementTable& table);

// P(Q <= q) for the studentized range of `groups` means with `df` degrees
// of freedom (df > 25000 is treated as infinite).
double StudentizedRangeCdf(double q, double groups,
                           double df = std::numeric_limits<double>::infinity());

// Upper tail of the chi-square distribution.
double ChiSquareSurvival(double x, double df);

}  // namespace xaibench

#endif  // XAIBENCH_STATS_H_
