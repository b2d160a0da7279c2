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

// Three-parameter logistic (3PL) item response theory.
//
// In the model-evaluation analogy the respondents are classifiers (or
// probed variants of one classifier), the items are test instances, and a
// response is correct when the predicted label matches the true label.
//
//   P(correct | theta) = c + (1 - c) / (1 + exp(-a (theta - b)))
//
// a = discrimination, b = difficulty, c = guessing, theta = ability.

#ifndef XAIBENCH_IRT_H_
#define XAIBENCH_IRT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xaibench/data.h"
#include "xaibench/models.h"

namespace xaibench {

inline constexpr double kMinDiscrimination = -4.0;
inline constexpr double kMaxDiscrimination = 4.0;
inline constexpr double kMinDifficulty = -6.0;
inline constexpr double kMaxDifficulty = 6.0;
inline constexpr double kMinGuessing = 0.0;
inline constexpr double kMaxGuessing = 0.5;
inline constexpr double kMinAbility = -4.0;
inline constexpr double kMaxAbility = 4.0;

// 3PL probability of a correct response. Overflow safe for any finite
// input; requires c in [0, 1).
double PCorrect(double a, double b, double c, double theta);

// Binary correctness matrix, respondents x items.
class ResponseMatrix {
 public:
  // `correct` is row-major, respondents x items, entries 0 or 1. Requires at
  // least 2 respondents and 2 items.
  ResponseMatrix(size_t num_respondents, size_t num_items,
                 std::vector<uint8_t> correct,
                 std::vector<std::string> respondent_ids,
                 std::vector<std::string> item_ids);

  size_t num_respondents() const { return num_respondents_; }
  size_t num_items() const { return num_items_; }
  bool correct(size_t respondent, size_t item) const {
    return correct_[respondent * num_items_ + item] != 0;
  }
  std::span<const uint8_t> respondent_row(size_t respondent) const {
    return {correct_.data() + respondent * num_items_, num_items_};
  }
  const std::vector<std::string>& respondent_ids() const {
    return respondent_ids_;
  }
  const std::vector<std::string>& item_ids() const { return item_ids_; }

  // Number of items answered correctly by `respondent`.
  size_t RawScore(size_t respondent) const;

  friend bool operator==(const ResponseMatrix&, const ResponseMatrix&) = default;

 private:
  size_t num_respondents_;
  size_t num_items_;
  std::vector<uint8_t> correct_;
  std::vector<std::string> respondent_ids_;
  std::vector<std::string> item_ids_;
};

// Respondent j's predicted probabilities for every row of `test`; a response
// is correct when (p >= 0.5) matches the label. Item ids are "i<row>".
ResponseMatrix ResponseMatrixFromPredictions(
    const std::vector<std::vector<double>>& probabilities,
    std::vector<std::string> respondent_ids, const Dataset& test);

// Every respondent predicts `test` directly. Throws InvalidArgument on a
// feature-schema mismatch.
ResponseMatrix BuildResponseMatrix(
    std::span<const Classifier* const> respondents,
    std::vector<std::string> respondent_ids, const Dataset& test);

struct ItemParameters {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;

  size_t size() const { return a.size(); }
  friend bool operator==(const ItemParameters&, const ItemParameters&) = default;
};

struct Abilities {
  std::vector<double> theta;
  friend bool operator==(const Abilities&, const Abilities&) = default;
};

struct IrtFitOptions {
  int max_outer = 50;
  // Stop when one outer iteration gains less than this.
  double tolerance = 1e-4;
  // Quadratic pull of a towards 1 and c towards 0.1.
  double penalty_weight = 0.01;
  double penalty_a_center = 1.0;
  double penalty_c_center = 0.1;
  // Probabilities are clipped to [eps, 1 - eps] inside the likelihood.
  double probability_epsilon = 1e-6;
  // Coordinate sweeps over (a, b, c) per item per outer iteration.
  int item_sweeps = 2;
  // Interval width at which golden-section search stops.
  double search_tolerance = 1e-5;
  // After fitting, rescale abilities to mean 0 and sample sd 1 (items
  // follow), so fits of different response matrices share a scale.
  bool standardize_abilities = true;
};

struct IrtFit {
  ItemParameters items;
  Abilities abilities;
  // Penalized log-likelihood at the returned parameters. Can differ from
  // trace.back() when the scale was standardized.
  double log_likelihood = 0.0;
  // Penalized log-likelihood after initialization and after every outer
  // iteration; non-decreasing.
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
};

// Joint maximum likelihood by alternating bounded coordinate search:
// abilities start at standardized raw scores, items at (a=1,
// b=-logit(share correct), c=0.1); each outer iteration re-fits every item
// with abilities fixed and then every ability with items fixed. Moves are only
// accepted when they improve the objective. See
// IrtFitOptions::standardize_abilities for the final rescale.
IrtFit Fit3pl(const ResponseMatrix& responses,
              const IrtFitOptions& options = {});

// Per-respondent bounded maximum-likelihood ability with items held fixed.
Abilities EstimateAbilities(const ResponseMatrix& responses,
                            const ItemParameters& items,
                            const IrtFitOptions& options = {});

// Penalized log-likelihood of `responses` under the given parameters.
double PenalizedLogLikelihood(const ResponseMatrix& responses,
                              const ItemParameters& items,
                              const Abilities& abilities,
                              const IrtFitOptions& options = {});

struct IccCurve {
  std::string item_id;
  std::vector<double> theta_grid;
  std::vector<double> p;
  bool negative_discrimination = false;
};

// `num_points` evenly spaced abilities over [-4, 4] (161 by default).
std::vector<double> ThetaGrid(size_t num_points = 161);

// One curve per item. `grid` must be ascending. `item_ids` may be empty.
std::vector<IccCurve> Icc(const ItemParameters& items,
                          std::span<const double> grid,
                          std::span<const std::string> item_ids = {});

// Pointwise mean of curves that share a grid.
std::vector<double> PointwiseAverage(std::span<const IccCurve> curves);

// The curve of the mean (a, b, c) over all items, evaluated on `grid`.
std::vector<double> MeanParameterCurve(const ItemParameters& items,
                                       std::span<const double> grid);

struct ReliabilitySummary {
  double mean_difficulty = 0.0;
  double mean_discrimination = 0.0;
  double mean_guessing = 0.0;
  double mean_ability = 0.0;
  size_t negative_item_count = 0;
  size_t item_count = 0;

  friend bool operator==(const ReliabilitySummary&,
                         const ReliabilitySummary&) = default;
};

ReliabilitySummary Summarize(const ItemParameters& items,
                             const Abilities& abilities);
inline ReliabilitySummary Summarize(const IrtFit& fit) {
  return Summarize(fit.items, fit.abilities);
}

enum class ReliabilityVerdict { kFirstMoreReliable, kSecondMoreReliable, kAmbiguous };

std::string_view ToString(ReliabilityVerdict verdict);

struct CompareOptions {
  // Dissenting margins below this never block a majority.
  double tie_epsilon = 0.05;
  // Adds mean ability (higher is better) as a fourth vote.
  bool use_ability = false;
};

// Votes: lower mean difficulty, higher mean discrimination, lower mean
// guessing (and optionally higher mean ability). A criterion with equal
// values abstains. The side with more votes wins unless a dissenting
// criterion's margin is at least tie_epsilon and larger than every
// majority margin; equal vote counts, no votes, or such a blocked majority
// give kAmbiguous. Swapping the arguments swaps the verdict.
ReliabilityVerdict CompareReliability(const ReliabilitySummary& first,
                                      const ReliabilitySummary& second,
                                      const CompareOptions& options = {});

}  // namespace xaibench

#endif  // XAIBENCH_IRT_H_
