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

#include "xaibench/irt.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xaibench/error.h"
#include "xaibench/metrics.h"

namespace xaibench {
namespace {

// Maximizes `f` over [lo, hi] by golden-section search, then compares the
// interior optimum with both end points and `current`. Returns the best of
// these; `current` wins ties so a move never lowers the objective.
template <typename F>
double GoldenMaximize(F f, double lo, double hi, double current,
                      double tolerance) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  double a = lo;
  double b = hi;
  while (b - a > tolerance) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  double best_x = current;
  double best_f = f(current);
  for (const double x : {f1 >= f2 ? x1 : x2, lo, hi}) {
    const double fx = f(x);
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  return best_x;
}

double LogProb(bool correct, double p, double eps) {
  p = std::clamp(p, eps, 1.0 - eps);
  return correct ? std::log(p) : std::log1p(-p);
}

double ItemPenalty(double a, double c, const IrtFitOptions& o) {
  const double da = a - o.penalty_a_center;
  const double dc = c - o.penalty_c_center;
  return o.penalty_weight * (da * da + dc * dc);
}

// Column view of one item's responses, plus the abilities it is fit against.
double ItemObjective(const ResponseMatrix& u, size_t item,
                     std::span<const double> theta, double a, double b,
                     double c, const IrtFitOptions& o) {
  double ll = 0.0;
  for (size_t r = 0; r < u.num_respondents(); ++r) {
    ll += LogProb(u.correct(r, item), PCorrect(a, b, c, theta[r]),
                  o.probability_epsilon);
  }
  return ll - ItemPenalty(a, c, o);
}

double RespondentLogLikelihood(const ResponseMatrix& u, size_t respondent,
                               const ItemParameters& items, double theta,
                               const IrtFitOptions& o) {
  double ll = 0.0;
  const auto row = u.respondent_row(respondent);
  for (size_t i = 0; i < row.size(); ++i) {
    ll += LogProb(row[i] != 0, PCorrect(items.a[i], items.b[i], items.c[i], theta),
                  o.probability_epsilon);
  }
  return ll;
}

void FitItem(const ResponseMatrix& u, size_t item,
             std::span<const double> theta, ItemParameters& items,
             const IrtFitOptions& o) {
  double& a = items.a[item];
  double& b = items.b[item];
  double& c = items.c[item];
  for (int sweep = 0; sweep < o.item_sweeps; ++sweep) {
    // Discrimination: search each sign separately so an item can flip to a
    // negative slope even when the likelihood in a is bimodal.
    auto fa = [&](double x) { return ItemObjective(u, item, theta, x, b, c, o); };
    const double neg = GoldenMaximize(fa, kMinDiscrimination, 0.0, a,
                                      o.search_tolerance);
    const double pos = GoldenMaximize(fa, 0.0, kMaxDiscrimination, a,
                                      o.search_tolerance);
    const double best_a = fa(pos) >= fa(neg) ? pos : neg;
    if (fa(best_a) > fa(a)) a = best_a;

    auto fb = [&](double x) { return ItemObjective(u, item, theta, a, x, c, o); };
    b = GoldenMaximize(fb, kMinDifficulty, kMaxDifficulty, b,
                       o.search_tolerance);

    auto fc = [&](double x) { return ItemObjective(u, item, theta, a, b, x, o); };
    c = GoldenMaximize(fc, kMinGuessing, kMaxGuessing, c, o.search_tolerance);
  }
}

double FitAbility(const ResponseMatrix& u, size_t respondent,
                  const ItemParameters& items, double current,
                  const IrtFitOptions& o) {
  auto f = [&](double t) {
    return RespondentLogLikelihood(u, respondent, items, t, o);
  };
  return GoldenMaximize(f, kMinAbility, kMaxAbility, current,
                        o.search_tolerance);
}

void ValidateItems(const ItemParameters& items, size_t num_items) {
  if (items.a.size() != num_items || items.b.size() != num_items ||
      items.c.size() != num_items) {
    throw InvalidArgument("item parameter count does not match item count");
  }
}

}  // namespace

double PCorrect(double a, double b, double c, double theta) {
  const double z = a * (theta - b);
  // Stable logistic: never evaluates exp of a large positive number.
  const double logistic =
      z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
  return c + (1.0 - c) * logistic;
}

ResponseMatrix::ResponseMatrix(size_t num_respondents, size_t num_items,
                               std::vector<uint8_t> correct,
                               std::vector<std::string> respondent_ids,
                               std::vector<std::string> item_ids)
    : num_respondents_(num_respondents),
      num_items_(num_items),
      correct_(std::move(correct)),
      respondent_ids_(std::move(respondent_ids)),
      item_ids_(std::move(item_ids)) {
  if (num_respondents_ < 2 || num_items_ < 2) {
    throw InvalidArgument(
        "ResponseMatrix: need at least 2 respondents and 2 items (got " +
        std::to_string(num_respondents_) + " x " + std::to_string(num_items_) +
        ")");
  }
  if (correct_.size() != num_respondents_ * num_items_) {
    throw InvalidArgument("ResponseMatrix: entry count mismatch");
  }
  for (const uint8_t v : correct_) {
    if (v > 1) throw InvalidArgument("ResponseMatrix: entries must be 0 or 1");
  }
  if (respondent_ids_.empty()) {
    for (size_t r = 0; r < num_respondents_; ++r) {
      respondent_ids_.push_back("r" + std::to_string(r));
    }
  }
  if (item_ids_.empty()) {
    for (size_t i = 0; i < num_items_; ++i) {
      item_ids_.push_back("i" + std::to_string(i));
    }
  }
  if (respondent_ids_.size() != num_respondents_ ||
      item_ids_.size() != num_items_) {
    throw InvalidArgument("ResponseMatrix: id count mismatch");
  }
}

size_t ResponseMatrix::RawScore(size_t respondent) const {
  const auto row = respondent_row(respondent);
  return static_cast<size_t>(std::count(row.begin(), row.end(), uint8_t{1}));
}

ResponseMatrix ResponseMatrixFromPredictions(
    const std::vector<std::vector<double>>& probabilities,
    std::vector<std::string> respondent_ids, const Dataset& test) {
  const size_t items = test.num_rows();
  std::vector<uint8_t> correct;
  correct.reserve(probabilities.size() * items);
  for (const auto& p : probabilities) {
    if (p.size() != items) {
      throw InvalidArgument("ResponseMatrix: prediction count mismatch");
    }
    for (size_t i = 0; i < items; ++i) {
      const int predicted = p[i] >= kDecisionThreshold ? 1 : 0;
      correct.push_back(predicted == test.labels()[i] ? 1 : 0);
    }
  }
  std::vector<std::string> item_ids(items);
  for (size_t i = 0; i < items; ++i) item_ids[i] = "i" + std::to_string(i);
  return ResponseMatrix(probabilities.size(), items, std::move(correct),
                        std::move(respondent_ids), std::move(item_ids));
}

ResponseMatrix BuildResponseMatrix(
    std::span<const Classifier* const> respondents,
    std::vector<std::string> respondent_ids, const Dataset& test) {
  std::vector<std::vector<double>> probabilities;
  for (const Classifier* model : respondents) {
    if (model->num_features() != test.num_features()) {
      throw InvalidArgument("BuildResponseMatrix: respondent expects " +
                            std::to_string(model->num_features()) +
                            " features, test set has " +
                            std::to_string(test.num_features()));
    }
    probabilities.push_back(model->PredictProba(test.features()));
  }
  return ResponseMatrixFromPredictions(probabilities, std::move(respondent_ids),
                                       test);
}

double PenalizedLogLikelihood(const ResponseMatrix& responses,
                              const ItemParameters& items,
                              const Abilities& abilities,
                              const IrtFitOptions& options) {
  ValidateItems(items, responses.num_items());
  double total = 0.0;
  for (size_t r = 0; r < responses.num_respondents(); ++r) {
    total += RespondentLogLikelihood(responses, r, items, abilities.theta[r],
                                     options);
  }
  for (size_t i = 0; i < items.size(); ++i) {
    total -= ItemPenalty(items.a[i], items.c[i], options);
  }
  return total;
}

namespace {

// theta -> (theta - m) / s with b following and a scaled by s, which leaves
// every a (theta - b) unchanged up to the parameter bounds.
void StandardizeScale(IrtFit& fit) {
  std::vector<double>& theta = fit.abilities.theta;
  const double n = static_cast<double>(theta.size());
  const double m = std::accumulate(theta.begin(), theta.end(), 0.0) / n;
  double ss = 0.0;
  for (const double t : theta) ss += (t - m) * (t - m);
  const double s = std::sqrt(ss / (n - 1.0));
  if (!(s > 0.0)) return;
  for (double& t : theta) t = std::clamp((t - m) / s, kMinAbility, kMaxAbility);
  for (size_t i = 0; i < fit.items.size(); ++i) {
    fit.items.a[i] =
        std::clamp(fit.items.a[i] * s, kMinDiscrimination, kMaxDiscrimination);
    fit.items.b[i] =
        std::clamp((fit.items.b[i] - m) / s, kMinDifficulty, kMaxDifficulty);
  }
}

}  // namespace

IrtFit Fit3pl(const ResponseMatrix& responses, const IrtFitOptions& options) {
  const size_t num_r = responses.num_respondents();
  const size_t num_i = responses.num_items();

  IrtFit fit;
  // Abilities: standardized raw scores.
  std::vector<double> raw(num_r);
  for (size_t r = 0; r < num_r; ++r) {
    raw[r] = static_cast<double>(responses.RawScore(r));
  }
  const double mean =
      std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(num_r);
  double ss = 0.0;
  for (const double v : raw) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(num_r - 1));
  fit.abilities.theta.resize(num_r);
  for (size_t r = 0; r < num_r; ++r) {
    const double z = sd > 0.0 ? (raw[r] - mean) / sd : 0.0;
    fit.abilities.theta[r] = std::clamp(z, kMinAbility, kMaxAbility);
  }

  // Items: a = 1, b = -logit(share correct), c = 0.1.
  fit.items.a.assign(num_i, 1.0);
  fit.items.c.assign(num_i, 0.1);
  fit.items.b.resize(num_i);
  for (size_t i = 0; i < num_i; ++i) {
    double right = 0.0;
    for (size_t r = 0; r < num_r; ++r) right += responses.correct(r, i);
    const double share =
        std::clamp(right / static_cast<double>(num_r),
                   options.probability_epsilon, 1.0 - options.probability_epsilon);
    fit.items.b[i] = std::clamp(-std::log(share / (1.0 - share)),
                                kMinDifficulty, kMaxDifficulty);
  }

  double objective =
      PenalizedLogLikelihood(responses, fit.items, fit.abilities, options);
  fit.trace.push_back(objective);
  for (int iter = 1; iter <= options.max_outer; ++iter) {
    for (size_t i = 0; i < num_i; ++i) {
      FitItem(responses, i, fit.abilities.theta, fit.items, options);
    }
    for (size_t r = 0; r < num_r; ++r) {
      fit.abilities.theta[r] = FitAbility(responses, r, fit.items,
                                          fit.abilities.theta[r], options);
    }
    const double next =
        PenalizedLogLikelihood(responses, fit.items, fit.abilities, options);
    fit.trace.push_back(next);
    fit.iterations = iter;
    const double gain = next - objective;
    objective = next;
    if (gain < options.tolerance) {
      fit.converged = true;
      break;
    }
  }
  if (options.standardize_abilities) StandardizeScale(fit);
  fit.log_likelihood =
      PenalizedLogLikelihood(responses, fit.items, fit.abilities, options);
  return fit;
}

Abilities EstimateAbilities(const ResponseMatrix& responses,
                            const ItemParameters& items,
                            const IrtFitOptions& options) {
  ValidateItems(items, responses.num_items());
  Abilities out;
  out.theta.resize(responses.num_respondents());
  for (size_t r = 0; r < responses.num_respondents(); ++r) {
    out.theta[r] = FitAbility(responses, r, items, 0.0, options);
  }
  return out;
}

std::vector<double> ThetaGrid(size_t num_points) {
  std::vector<double> grid(num_points);
  if (num_points == 1) return {0.0};
  for (size_t k = 0; k < num_points; ++k) {
    grid[k] = kMinAbility + (kMaxAbility - kMinAbility) * static_cast<double>(k) /
                                static_cast<double>(num_points - 1);
  }
  return grid;
}

std::vector<IccCurve> Icc(const ItemParameters& items,
                          std::span<const double> grid,
                          std::span<const std::string> item_ids) {
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw InvalidArgument("Icc: theta grid must be ascending");
  }
  std::vector<IccCurve> curves(items.size());
  for (size_t i = 0; i < items.size(); ++i) {
    IccCurve& curve = curves[i];
    curve.item_id =
        i < item_ids.size() ? item_ids[i] : "i" + std::to_string(i);
    curve.theta_grid.assign(grid.begin(), grid.end());
    curve.p.resize(grid.size());
    for (size_t k = 0; k < grid.size(); ++k) {
      curve.p[k] = PCorrect(items.a[i], items.b[i], items.c[i], grid[k]);
    }
    curve.negative_discrimination = items.a[i] < 0.0;
  }
  return curves;
}

std::vector<double> MeanParameterCurve(const ItemParameters& items,
                                       std::span<const double> grid) {
  if (items.size() == 0) throw InvalidArgument("MeanParameterCurve: no items");
  const double n = static_cast<double>(items.size());
  const double a = std::accumulate(items.a.begin(), items.a.end(), 0.0) / n;
  const double b = std::accumulate(items.b.begin(), items.b.end(), 0.0) / n;
  const double c = std::accumulate(items.c.begin(), items.c.end(), 0.0) / n;
  std::vector<double> p(grid.size());
  for (size_t g = 0; g < grid.size(); ++g) p[g] = PCorrect(a, b, c, grid[g]);
  return p;
}

std::vector<double> PointwiseAverage(std::span<const IccCurve> curves) {
  if (curves.empty()) return {};
  std::vector<double> mean(curves.front().p.size(), 0.0);
  for (const auto& curve : curves) {
    if (curve.p.size() != mean.size()) {
      throw InvalidArgument("PointwiseAverage: curves use different grids");
    }
    for (size_t k = 0; k < mean.size(); ++k) mean[k] += curve.p[k];
  }
  for (double& v : mean) v /= static_cast<double>(curves.size());
  return mean;
}

ReliabilitySummary Summarize(const ItemParameters& items,
                             const Abilities& abilities) {
  ReliabilitySummary s;
  s.item_count = items.size();
  auto mean = [](const std::vector<double>& v) {
    return v.empty() ? 0.0
                     : std::accumulate(v.begin(), v.end(), 0.0) /
                           static_cast<double>(v.size());
  };
  s.mean_discrimination = mean(items.a);
  s.mean_difficulty = mean(items.b);
  s.mean_guessing = mean(items.c);
  s.mean_ability = mean(abilities.theta);
  s.negative_item_count = static_cast<size_t>(
      std::count_if(items.a.begin(), items.a.end(), [](double a) { return a < 0.0; }));
  return s;
}

std::string_view ToString(ReliabilityVerdict verdict) {
  switch (verdict) {
    case ReliabilityVerdict::kFirstMoreReliable:
      return "first_more_reliable";
    case ReliabilityVerdict::kSecondMoreReliable:
      return "second_more_reliable";
    case ReliabilityVerdict::kAmbiguous:
      return "ambiguous";
  }
  return "?";
}

ReliabilityVerdict CompareReliability(const ReliabilitySummary& first,
                                      const ReliabilitySummary& second,
                                      const CompareOptions& options) {
  // Positive margin = the criterion favours `first`.
  std::vector<double> margins = {
      second.mean_difficulty - first.mean_difficulty,
      first.mean_discrimination - second.mean_discrimination,
      second.mean_guessing - first.mean_guessing,
  };
  if (options.use_ability) {
    margins.push_back(first.mean_ability - second.mean_ability);
  }
  int votes_first = 0;
  int votes_second = 0;
  double max_first = 0.0;
  double max_second = 0.0;
  for (const double m : margins) {
    if (m > 0.0) {
      ++votes_first;
      max_first = std::max(max_first, m);
    } else if (m < 0.0) {
      ++votes_second;
      max_second = std::max(max_second, -m);
    }
  }
  if (votes_first == votes_second) return ReliabilityVerdict::kAmbiguous;
  const bool first_wins = votes_first > votes_second;
  const double majority_max = first_wins ? max_first : max_second;
  const double dissent_max = first_wins ? max_second : max_first;
  if (dissent_max >= options.tie_epsilon && dissent_max > majority_max) {
    return ReliabilityVerdict::kAmbiguous;
  }
  return first_wins ? ReliabilityVerdict::kFirstMoreReliable
                    : ReliabilityVerdict::kSecondMoreReliable;
}

}  // namespace xaibench
