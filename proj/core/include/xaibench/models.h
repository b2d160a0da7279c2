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

// The four classifier families (gradient-boosted trees, multilayer
// perceptron, CART, k-nearest-neighbours), hyperparameter selection by
// stratified k-fold cross-validation on ROC AUC, and model persistence.

#ifndef XAIBENCH_MODELS_H_
#define XAIBENCH_MODELS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xaibench/data.h"
#include "xaibench/matrix.h"
#include "xaibench/metrics.h"
#include "xaibench/tree.h"

namespace xaibench {

enum class ModelKind { kGbt, kMlp, kCart, kKnn };

inline constexpr std::array<ModelKind, 4> kAllModelKinds = {
    ModelKind::kGbt, ModelKind::kMlp, ModelKind::kCart, ModelKind::kKnn};

std::string_view ToString(ModelKind kind);
ModelKind ParseModelKind(std::string_view name);

// Anything that yields P(label = 1) per row. Implementations must be safe to
// call concurrently.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual size_t num_features() const = 0;
  virtual std::vector<double> PredictProba(const Matrix& features) const = 0;
};

struct GbtParams {
  int num_rounds = 100;
  int max_depth = 3;
  double learning_rate = 0.1;
  double l2 = 1.0;
  friend bool operator==(const GbtParams&, const GbtParams&) = default;
};

struct MlpParams {
  int hidden_units = 16;
  int epochs = 100;
  double learning_rate = 0.01;
  double weight_decay = 1e-4;
  friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

struct CartParams {
  int max_depth = 0;  // 0 = unlimited
  int min_samples_leaf = 1;
  friend bool operator==(const CartParams&, const CartParams&) = default;
};

struct KnnParams {
  int k = 5;
  friend bool operator==(const KnnParams&, const KnnParams&) = default;
};

using Hyperparameters = std::variant<GbtParams, MlpParams, CartParams, KnnParams>;

ModelKind KindOf(const Hyperparameters& params);
std::string Describe(const Hyperparameters& params);

struct CVConfig {
  int folds = 4;
  // Candidate grids, searched in declaration order.
  std::vector<GbtParams> gbt_grid;
  std::vector<MlpParams> mlp_grid;
  std::vector<CartParams> cart_grid;
  std::vector<KnnParams> knn_grid;

  // gbt: rounds {50, 100, 200} x depth {2, 3}; mlp: hidden {8, 16, 32};
  // cart: depth {3, 5, 7, unlimited}; knn: k {3, 5, 7, 11}.
  static CVConfig Default();

  std::vector<Hyperparameters> Grid(ModelKind kind) const;
};

struct CandidateScore {
  Hyperparameters params;
  double mean_auc = 0.0;
};

// Fitted state per family.
struct GbtState {
  double base_score = 0.0;  // initial log-odds
  std::vector<DecisionTree> trees;
  friend bool operator==(const GbtState&, const GbtState&) = default;
};

struct MlpState {
  size_t inputs = 0;
  size_t hidden = 0;
  std::vector<double> w1;  // hidden x inputs, row-major
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // hidden
  double b2 = 0.0;
  friend bool operator==(const MlpState&, const MlpState&) = default;
};

struct CartState {
  DecisionTree tree;
  friend bool operator==(const CartState&, const CartState&) = default;
};

struct KnnState {
  Matrix points;
  std::vector<int> labels;
  friend bool operator==(const KnnState&, const KnnState&) = default;
};

// Constant P(label = 1); the fallback used when no features remain.
struct ConstantState {
  double probability = 0.5;
  friend bool operator==(const ConstantState&, const ConstantState&) = default;
};

using FittedState =
    std::variant<GbtState, MlpState, CartState, KnnState, ConstantState>;

struct TrainingInfo {
  uint64_t seed = 0;
  double cv_auc = 0.0;  // mean fold AUC of the chosen candidate
  std::vector<CandidateScore> candidates;
  // gbt only: mean logistic loss on the training set after each round,
  // starting with the base score.
  std::vector<double> loss_trace;
};

class TrainedModel : public Classifier {
 public:
  TrainedModel(ModelKind kind, Hyperparameters params, size_t num_features,
               FittedState state, TrainingInfo info);

  ModelKind kind() const { return kind_; }
  const Hyperparameters& params() const { return params_; }
  const FittedState& state() const { return state_; }
  const TrainingInfo& info() const { return info_; }
  size_t num_features() const override { return num_features_; }

  // Throws InvalidArgument on a column-count mismatch. Values in [0, 1].
  std::vector<double> PredictProba(const Matrix& features) const override;

 private:
  ModelKind kind_;
  Hyperparameters params_;
  size_t num_features_;
  FittedState state_;
  TrainingInfo info_;
};

// Fits one configuration on all of `train` (no tuning).
TrainedModel Fit(const Hyperparameters& params, const Dataset& train,
                 uint64_t seed);

// Majority-share model (predicts the training prior for every row).
TrainedModel FitConstant(std::span<const int> labels, size_t num_features);

// Stratified fold id per row: each class is shuffled and dealt round-robin.
std::vector<int> StratifiedFolds(std::span<const int> labels, int folds,
                                 uint64_t seed);

// Grid search by mean fold ROC AUC (first candidate wins ties), then refit
// on the full training split. Throws InvalidArgument when `train` holds a
// single class.
TrainedModel Train(ModelKind kind, const Dataset& train, const CVConfig& cv,
                   uint64_t seed);

MetricReport Evaluate(const Classifier& model, const Dataset& test);

std::string SerializeModel(const TrainedModel& model);
TrainedModel DeserializeModel(std::string_view text);
void SaveModel(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel LoadModel(const std::filesystem::path& path);

}  // namespace xaibench

#endif  // XAIBENCH_MODELS_H_
