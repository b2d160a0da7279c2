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

#include "xaibench/explainers.h"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

#include "xaibench/error.h"
#include "xaibench/metrics.h"
#include "xaibench/random.h"

namespace xaibench {
namespace {

void CheckSchema(const Classifier& model, const Dataset& data,
                 std::string_view who) {
  if (model.num_features() != data.num_features()) {
    throw InvalidArgument(std::string(who) + ": model expects " +
                          std::to_string(model.num_features()) +
                          " features, dataset has " +
                          std::to_string(data.num_features()));
  }
}

double MeanOf(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double StddevOf(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = MeanOf(v);
  double ss = 0.0;
  for (const double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

uint64_t FeatureSeed(uint64_t seed, std::string_view method, size_t feature) {
  return MixSeed(MixSeed(seed, method), static_cast<uint64_t>(feature));
}

// Copy of `x` with column `feature` shuffled.
Matrix ShuffleColumn(const Matrix& x, size_t feature, Rng& rng) {
  Matrix out = x;
  auto column = x.column(feature);
  rng.Shuffle(column);
  out.set_column(feature, column);
  return out;
}

// Runs `per_feature(f, scores_of_f)` for every feature and builds the rank
// from the mean and spread of each feature's scores.
template <typename PerFeature>
RelevanceRank RankFromRepetitions(ExplainerKind kind, const Dataset& data,
                                  PerFeature per_feature) {
  const size_t m = data.num_features();
  std::vector<double> mean(m), spread(m);
  for (size_t f = 0; f < m; ++f) {
    const std::vector<double> values = per_feature(f);
    mean[f] = MeanOf(values);
    spread[f] = StddevOf(values);
  }
  return MakeRank(kind, data.feature_names(), mean, spread);
}

double Binomial(size_t n, size_t k) {
  double out = 1.0;
  for (size_t i = 1; i <= k; ++i) {
    out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return out;
}

struct Coalition {
  uint64_t mask;
  double weight;
};

std::vector<Coalition> ExactCoalitions(size_t m) {
  std::vector<Coalition> out;
  const uint64_t full = (uint64_t{1} << m) - 1;
  for (uint64_t mask = 1; mask < full; ++mask) {
    const auto s = static_cast<size_t>(std::popcount(mask));
    const double w = static_cast<double>(m - 1) /
                     (Binomial(m, s) * static_cast<double>(s) *
                      static_cast<double>(m - s));
    out.push_back({mask, w});
  }
  return out;
}

// Enumerates whole coalition sizes (smallest and largest first) while the
// budget covers them, then samples the remaining sizes in complementary
// pairs in proportion to the kernel mass they carry.
std::vector<Coalition> SampledCoalitions(size_t m, size_t budget, Rng& rng) {
  const size_t num_sizes = (m - 1 + 1) / 2;  // ceil((m - 1) / 2)
  const size_t num_paired = (m - 1) / 2;
  std::vector<double> size_weight(num_sizes);
  for (size_t s = 1; s <= num_sizes; ++s) {
    size_weight[s - 1] = static_cast<double>(m - 1) /
                         (static_cast<double>(s) * static_cast<double>(m - s));
    if (s <= num_paired) size_weight[s - 1] *= 2.0;
  }
  const double total = std::accumulate(size_weight.begin(), size_weight.end(), 0.0);
  for (double& w : size_weight) w /= total;

  std::vector<Coalition> out;
  std::map<uint64_t, size_t> index;
  auto add = [&](uint64_t mask, double weight) {
    const auto [it, inserted] = index.emplace(mask, out.size());
    if (inserted) {
      out.push_back({mask, weight});
    } else {
      out[it->second].weight += weight;
    }
    return inserted;
  };
  const uint64_t full = (uint64_t{1} << m) - 1;

  std::vector<double> remaining = size_weight;
  double samples_left = static_cast<double>(budget);
  size_t full_sizes = 0;
  for (size_t s = 1; s <= num_sizes; ++s) {
    double count = Binomial(m, s);
    if (s <= num_paired) count *= 2.0;
    if (samples_left * remaining[s - 1] / count < 1.0 - 1e-8) break;
    ++full_sizes;
    samples_left -= count;
    if (remaining[s - 1] < 1.0) {
      const double scale = 1.0 - remaining[s - 1];
      for (double& w : remaining) w /= scale;
    }
    double w = size_weight[s - 1] / Binomial(m, s);
    if (s <= num_paired) w /= 2.0;
    for (uint64_t mask = 1; mask < full; ++mask) {
      if (static_cast<size_t>(std::popcount(mask)) == s) {
        add(mask, w);
        if (s <= num_paired) add(full & ~mask, w);
      }
    }
  }
  if (full_sizes == num_sizes || samples_left < 1.0) return out;

  const size_t fixed = out.size();
  std::vector<double> draw_weight(size_weight.begin() + full_sizes,
                                  size_weight.end());
  for (size_t k = 0; k < draw_weight.size(); ++k) {
    if (k + full_sizes + 1 > num_paired) draw_weight[k] /= 2.0;
  }
  std::vector<double> cumulative(draw_weight.size());
  std::partial_sum(draw_weight.begin(), draw_weight.end(), cumulative.begin());

  auto left = static_cast<size_t>(samples_left);
  // A cap on draws guards against tiny coalition spaces that the budget
  // already covers.
  for (size_t draws = 0; left > 0 && draws < 16 * budget; ++draws) {
    const double u = rng.Uniform() * cumulative.back();
    const size_t k = static_cast<size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), u) -
        cumulative.begin());
    const size_t s = std::min(k, draw_weight.size() - 1) + full_sizes + 1;
    uint64_t mask = 0;
    for (const size_t j : rng.SampleWithoutReplacement(m, s)) {
      mask |= uint64_t{1} << j;
    }
    if (add(mask, 1.0)) --left;
    if (left > 0 && s <= num_paired) {
      if (add(full & ~mask, 1.0)) --left;
    }
  }
  const double mass_left = std::accumulate(size_weight.begin() + full_sizes,
                                           size_weight.end(), 0.0);
  double sampled = 0.0;
  for (size_t i = fixed; i < out.size(); ++i) sampled += out[i].weight;
  for (size_t i = fixed; i < out.size(); ++i) {
    out[i].weight *= mass_left / sampled;
  }
  return out;
}

}  // namespace

std::string_view ToString(ExplainerKind kind) {
  switch (kind) {
    case ExplainerKind::kDalex:
      return "dalex";
    case ExplainerKind::kEli5:
      return "eli5";
    case ExplainerKind::kExirt:
      return "exirt";
    case ExplainerKind::kLofo:
      return "lofo";
    case ExplainerKind::kShap:
      return "shap";
    case ExplainerKind::kSkater:
      return "skater";
  }
  return "?";
}

ExplainerKind ParseExplainerKind(std::string_view name) {
  for (const ExplainerKind kind : kAllExplainerKinds) {
    if (ToString(kind) == name) return kind;
  }
  throw InvalidArgument("unknown explainer: '" + std::string(name) +
                        "' (expected dalex, eli5, exirt, lofo, shap or skater)");
}

size_t RelevanceRank::PositionOf(std::string_view feature) const {
  for (size_t i = 0; i < ordered_features.size(); ++i) {
    if (ordered_features[i] == feature) return i + 1;
  }
  throw InvalidArgument("feature not in rank: " + std::string(feature));
}

RelevanceRank MakeRank(ExplainerKind explainer,
                       std::span<const std::string> feature_names,
                       std::span<const double> scores,
                       std::span<const double> stddev) {
  if (scores.size() != feature_names.size() ||
      (!stddev.empty() && stddev.size() != scores.size())) {
    throw InvalidArgument("MakeRank: size mismatch");
  }
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  RelevanceRank rank;
  rank.explainer = explainer;
  for (const size_t f : order) {
    rank.ordered_features.push_back(feature_names[f]);
    rank.scores.push_back(scores[f]);
    rank.score_stddev.push_back(stddev.empty() ? 0.0 : stddev[f]);
  }
  return rank;
}

double BinaryEntropy(double p) {
  auto term = [](double q) { return q > 0.0 ? -q * std::log2(q) : 0.0; };
  return term(p) + term(1.0 - p);
}

RelevanceRank ExplainDalexStyle(const Classifier& model, const Dataset& test,
                                const ExplainerConfig& config) {
  CheckSchema(model, test, "dalex");
  const size_t n = test.num_rows();
  const Matrix& x = test.features();

  // Reflection about the column mean, shared by all repetitions.
  const size_t m = test.num_features();
  std::vector<std::vector<double>> reflected_proba(m);
  for (size_t f = 0; f < m; ++f) {
    auto column = x.column(f);
    const double mean = MeanOf(column);
    for (double& v : column) v = 2.0 * mean - v;
    Matrix reflected = x;
    reflected.set_column(f, column);
    reflected_proba[f] = model.PredictProba(reflected);
  }
  const auto base_proba = model.PredictProba(x);

  // One row sample per repetition: all rows when there is a single
  // repetition, bootstrap resamples otherwise.
  const int reps = std::max(1, config.repetitions);
  std::vector<std::vector<size_t>> samples(reps);
  Rng rng(MixSeed(config.seed, "dalex"));
  for (int r = 0; r < reps; ++r) {
    samples[r].resize(n);
    for (size_t i = 0; i < n; ++i) samples[r][i] = reps == 1 ? i : rng.Index(n);
  }
  auto auc_on = [&](const std::vector<size_t>& rows,
                    const std::vector<double>& proba) {
    std::vector<int> y(rows.size());
    std::vector<double> p(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
      y[i] = test.labels()[rows[i]];
      p[i] = proba[rows[i]];
    }
    return RocAuc(y, p);
  };
  return RankFromRepetitions(ExplainerKind::kDalex, test, [&](size_t f) {
    std::vector<double> drops(reps);
    for (int r = 0; r < reps; ++r) {
      drops[r] = auc_on(samples[r], base_proba) -
                 auc_on(samples[r], reflected_proba[f]);
    }
    return drops;
  });
}

RelevanceRank ExplainEli5Style(const Classifier& model, const Dataset& test,
                               const ExplainerConfig& config) {
  CheckSchema(model, test, "eli5");
  const double baseline =
      Accuracy(test.labels(), model.PredictProba(test.features()));
  const int reps = std::max(1, config.repetitions);
  return RankFromRepetitions(ExplainerKind::kEli5, test, [&](size_t f) {
    Rng rng(FeatureSeed(config.seed, "eli5", f));
    std::vector<double> drops(reps);
    for (int r = 0; r < reps; ++r) {
      const Matrix shuffled = ShuffleColumn(test.features(), f, rng);
      drops[r] = baseline - Accuracy(test.labels(), model.PredictProba(shuffled));
    }
    return drops;
  });
}

RelevanceRank ExplainSkaterStyle(const Classifier& model, const Dataset& test,
                                 const ExplainerConfig& config) {
  CheckSchema(model, test, "skater");
  const auto base = model.PredictProba(test.features());
  std::vector<double> base_entropy(base.size());
  for (size_t i = 0; i < base.size(); ++i) base_entropy[i] = BinaryEntropy(base[i]);
  const int reps = std::max(1, config.repetitions);
  return RankFromRepetitions(ExplainerKind::kSkater, test, [&](size_t f) {
    Rng rng(FeatureSeed(config.seed, "skater", f));
    std::vector<double> changes(reps);
    for (int r = 0; r < reps; ++r) {
      const auto p = model.PredictProba(ShuffleColumn(test.features(), f, rng));
      double total = 0.0;
      for (size_t i = 0; i < p.size(); ++i) {
        total += std::abs(BinaryEntropy(p[i]) - base_entropy[i]);
      }
      changes[r] = total / static_cast<double>(p.size());
    }
    return changes;
  });
}

RelevanceRank ExplainLofoStyle(const TrainedModel& model, const Dataset& data,
                               const ExplainerConfig& config) {
  CheckSchema(model, data, "lofo");
  const int folds = config.lofo_folds;
  const auto fold_of = StratifiedFolds(data.labels(), folds,
                                       MixSeed(config.seed, "lofo-folds"));
  const size_t m = data.num_features();
  // drops[f][k]: AUC lost on fold k when feature f is removed.
  std::vector<std::vector<double>> drops(m, std::vector<double>(folds));
  for (int k = 0; k < folds; ++k) {
    std::vector<size_t> fit_rows, holdout_rows;
    for (size_t i = 0; i < fold_of.size(); ++i) {
      (fold_of[i] == k ? holdout_rows : fit_rows).push_back(i);
    }
    const Dataset fit_part = data.SelectRows(fit_rows);
    const Dataset holdout = data.SelectRows(holdout_rows);
    if (fit_part.CountLabel(0) == 0 || fit_part.CountLabel(1) == 0) {
      throw Failure("lofo: fold " + std::to_string(k) +
                    " has a single-class training part");
    }
    const uint64_t fold_seed = MixSeed(MixSeed(config.seed, "lofo"),
                                       static_cast<uint64_t>(k));
    const TrainedModel full = Fit(model.params(), fit_part, fold_seed);
    const double base =
        RocAuc(holdout.labels(), full.PredictProba(holdout.features()));
    for (size_t f = 0; f < m; ++f) {
      double reduced_auc;
      if (m == 1) {
        const TrainedModel prior = FitConstant(fit_part.labels(), 0);
        reduced_auc = RocAuc(holdout.labels(),
                             prior.PredictProba(Matrix(holdout.num_rows(), 0)));
      } else {
        const Dataset fit_reduced = fit_part.DropFeature(f);
        const Dataset holdout_reduced = holdout.DropFeature(f);
        const TrainedModel reduced = Fit(model.params(), fit_reduced, fold_seed);
        reduced_auc = RocAuc(holdout.labels(),
                             reduced.PredictProba(holdout_reduced.features()));
      }
      drops[f][k] = base - reduced_auc;
    }
  }
  return RankFromRepetitions(ExplainerKind::kLofo, data,
                             [&](size_t f) { return drops[f]; });
}

std::vector<double> ColumnMeans(const Dataset& background) {
  std::vector<double> means(background.num_features());
  for (size_t f = 0; f < means.size(); ++f) {
    means[f] = MeanOf(background.features().column(f));
  }
  return means;
}

std::vector<double> KernelShapValues(const Classifier& model,
                                     std::span<const double> instance,
                                     std::span<const double> reference,
                                     const ExplainerConfig& config,
                                     uint64_t seed) {
  const size_t m = instance.size();
  if (reference.size() != m || model.num_features() != m) {
    throw InvalidArgument("KernelShapValues: dimension mismatch");
  }
  if (m == 0) return {};
  if (m > 62) throw InvalidArgument("KernelShapValues: at most 62 features");

  const bool exact = m <= config.exact_max_features;
  if (!exact && config.coalition_budget < m + 2) {
    throw InvalidArgument("KernelShapValues: coalition_budget must be >= M + 2");
  }
  Rng rng(seed);
  const std::vector<Coalition> coalitions =
      m == 1 ? std::vector<Coalition>{}
      : exact ? ExactCoalitions(m)
              : SampledCoalitions(m, config.coalition_budget, rng);

  // Rows: empty coalition, full coalition, then every sampled coalition.
  const uint64_t full_mask = (uint64_t{1} << m) - 1;
  Matrix probe(coalitions.size() + 2, m);
  auto fill = [&](size_t row, uint64_t mask) {
    for (size_t j = 0; j < m; ++j) {
      probe(row, j) = (mask >> j) & 1 ? instance[j] : reference[j];
    }
  };
  fill(0, 0);
  fill(1, full_mask);
  for (size_t i = 0; i < coalitions.size(); ++i) fill(i + 2, coalitions[i].mask);
  const std::vector<double> f = model.PredictProba(probe);
  const double f_empty = f[0];
  const double delta = f[1] - f_empty;

  std::vector<double> phi(m, 0.0);
  // Features that never change the output are exact zeros (dummy axiom);
  // detectable only when every coalition was evaluated.
  std::vector<size_t> active;
  if (exact) {
    std::vector<double> by_mask(full_mask + 1);
    by_mask[0] = f_empty;
    by_mask[full_mask] = f[1];
    for (size_t i = 0; i < coalitions.size(); ++i) {
      by_mask[coalitions[i].mask] = f[i + 2];
    }
    for (size_t j = 0; j < m; ++j) {
      const uint64_t bit = uint64_t{1} << j;
      bool dummy = true;
      for (uint64_t mask = 0; mask <= full_mask && dummy; ++mask) {
        if (!(mask & bit)) dummy = by_mask[mask] == by_mask[mask | bit];
      }
      if (!dummy) active.push_back(j);
    }
  } else {
    active.resize(m);
    std::iota(active.begin(), active.end(), size_t{0});
  }
  if (active.empty()) return phi;
  if (active.size() == 1) {
    phi[active[0]] = delta;
    return phi;
  }

  // Constrained WLS: eliminate the last active feature through
  // sum(phi) = delta.
  const size_t k = active.size() - 1;
  const size_t last = active.back();
  Eigen::MatrixXd xtwx = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                               static_cast<Eigen::Index>(k));
  Eigen::VectorXd xtwy = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  Eigen::VectorXd row(static_cast<Eigen::Index>(k));
  for (size_t i = 0; i < coalitions.size(); ++i) {
    const uint64_t mask = coalitions[i].mask;
    const double z_last = (mask >> last) & 1 ? 1.0 : 0.0;
    for (size_t a = 0; a < k; ++a) {
      row(static_cast<Eigen::Index>(a)) =
          ((mask >> active[a]) & 1 ? 1.0 : 0.0) - z_last;
    }
    const double y = f[i + 2] - f_empty - z_last * delta;
    const double w = coalitions[i].weight;
    xtwx.noalias() += w * row * row.transpose();
    xtwy.noalias() += w * y * row;
  }
  const Eigen::VectorXd beta = xtwx.ldlt().solve(xtwy);
  double assigned = 0.0;
  for (size_t a = 0; a < k; ++a) {
    phi[active[a]] = beta(static_cast<Eigen::Index>(a));
    assigned += phi[active[a]];
  }
  phi[last] = delta - assigned;
  return phi;
}

RelevanceRank ExplainKernelShap(const Classifier& model, const Dataset& test,
                                std::span<const double> reference,
                                const ExplainerConfig& config) {
  CheckSchema(model, test, "shap");
  const size_t m = test.num_features();
  std::vector<std::vector<double>> abs_values(m,
                                              std::vector<double>(test.num_rows()));
  for (size_t i = 0; i < test.num_rows(); ++i) {
    const auto phi = KernelShapValues(
        model, test.features().row(i), reference, config,
        MixSeed(MixSeed(config.seed, "shap"), static_cast<uint64_t>(i)));
    for (size_t f = 0; f < m; ++f) abs_values[f][i] = std::abs(phi[f]);
  }
  return RankFromRepetitions(ExplainerKind::kShap, test,
                             [&](size_t f) { return abs_values[f]; });
}

ExirtResult ExplainExirt(const Classifier& model, const Dataset& test,
                         const ExplainerConfig& config) {
  CheckSchema(model, test, "exirt");
  const Matrix& x = test.features();
  const size_t m = test.num_features();
  const size_t n = test.num_rows();

  std::vector<std::vector<double>> probabilities;
  std::vector<std::string> ids;
  probabilities.push_back(model.PredictProba(x));
  ids.push_back("original");
  for (size_t f = 0; f < m; ++f) {
    Rng rng(FeatureSeed(config.seed, "exirt", f));
    probabilities.push_back(model.PredictProba(ShuffleColumn(x, f, rng)));
    ids.push_back("shuffle:" + test.feature_names()[f]);
  }
  const int boot = std::max(0, config.bootstrap_respondents);
  for (int b = 0; b < boot; ++b) {
    Rng rng(FeatureSeed(config.seed, "exirt-boot", static_cast<size_t>(b)));
    const double share = 0.5 * static_cast<double>(b + 1) / boot;
    Matrix probe = x;
    for (size_t r = 0; r < n; ++r) {
      for (size_t c = 0; c < m; ++c) {
        if (rng.Uniform() < share) probe(r, c) = x(rng.Index(n), c);
      }
    }
    probabilities.push_back(model.PredictProba(probe));
    ids.push_back("resample:" + std::to_string(b));
  }

  ResponseMatrix responses =
      ResponseMatrixFromPredictions(probabilities, std::move(ids), test);
  IrtFit fit = Fit3pl(responses, config.irt);
  std::vector<double> scores(m);
  for (size_t f = 0; f < m; ++f) {
    scores[f] = config.exirt_score
                    ? config.exirt_score(fit, 0, f + 1)
                    : fit.abilities.theta[0] - fit.abilities.theta[f + 1];
  }
  RelevanceRank rank = MakeRank(ExplainerKind::kExirt, test.feature_names(), scores);
  return ExirtResult{std::move(rank), std::move(responses), std::move(fit)};
}

}  // namespace xaibench
