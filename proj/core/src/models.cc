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

#include "xaibench/models.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json_io.h"
#include "xaibench/error.h"
#include "xaibench/random.h"

namespace xaibench {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double LogisticLoss(std::span<const int> labels, std::span<const double> margin) {
  double loss = 0.0;
  for (size_t i = 0; i < labels.size(); ++i) {
    // log(1 + exp(-s * m)) with s = +-1, overflow safe.
    const double z = labels[i] == 1 ? margin[i] : -margin[i];
    loss += z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
  }
  return loss / static_cast<double>(labels.size());
}

double PositiveShare(std::span<const int> labels) {
  if (labels.empty()) return 0.5;
  return static_cast<double>(std::count(labels.begin(), labels.end(), 1)) /
         static_cast<double>(labels.size());
}

GbtState FitGbt(const GbtParams& p, const Matrix& x, std::span<const int> y,
                std::vector<double>* loss_trace) {
  GbtState state;
  const double prior = std::clamp(PositiveShare(y), 1e-6, 1.0 - 1e-6);
  state.base_score = std::log(prior / (1.0 - prior));
  const size_t n = x.rows();
  std::vector<double> margin(n, state.base_score);
  std::vector<double> grad(n), hess(n);
  GradientTreeOptions options;
  options.max_depth = p.max_depth;
  options.l2 = p.l2;
  if (loss_trace) loss_trace->push_back(LogisticLoss(y, margin));
  for (int round = 0; round < p.num_rounds; ++round) {
    for (size_t i = 0; i < n; ++i) {
      const double prob = Sigmoid(margin[i]);
      grad[i] = prob - y[i];
      hess[i] = std::max(prob * (1.0 - prob), 1e-16);
    }
    DecisionTree tree = FitGradientTree(x, grad, hess, options);
    for (auto& node : tree.nodes) node.value *= p.learning_rate;
    for (size_t i = 0; i < n; ++i) margin[i] += tree.Predict(x.row(i));
    state.trees.push_back(std::move(tree));
    if (loss_trace) loss_trace->push_back(LogisticLoss(y, margin));
  }
  return state;
}

double MlpForward(const MlpState& s, std::span<const double> x,
                  std::vector<double>& hidden) {
  double z = s.b2;
  for (size_t h = 0; h < s.hidden; ++h) {
    double a = s.b1[h];
    const double* w = s.w1.data() + h * s.inputs;
    for (size_t j = 0; j < s.inputs; ++j) a += w[j] * x[j];
    hidden[h] = std::tanh(a);
    z += s.w2[h] * hidden[h];
  }
  return Sigmoid(z);
}

MlpState FitMlp(const MlpParams& p, const Matrix& x, std::span<const int> y,
                uint64_t seed) {
  MlpState s;
  s.inputs = x.cols();
  s.hidden = static_cast<size_t>(p.hidden_units);
  Rng rng(MixSeed(seed, "mlp-init"));
  const double r1 = std::sqrt(6.0 / static_cast<double>(s.inputs + s.hidden));
  const double r2 = std::sqrt(6.0 / static_cast<double>(s.hidden + 1));
  s.w1.resize(s.hidden * s.inputs);
  for (auto& w : s.w1) w = rng.Uniform(-r1, r1);
  s.b1.assign(s.hidden, 0.0);
  s.w2.resize(s.hidden);
  for (auto& w : s.w2) w = rng.Uniform(-r2, r2);

  std::vector<size_t> order(x.rows());
  std::iota(order.begin(), order.end(), size_t{0});
  std::vector<double> hidden(s.hidden);
  const double lr = p.learning_rate;
  const double decay = 1.0 - lr * p.weight_decay;
  for (int epoch = 0; epoch < p.epochs; ++epoch) {
    rng.Shuffle(order);
    for (const size_t i : order) {
      const auto xi = x.row(i);
      const double out = MlpForward(s, xi, hidden);
      const double dz = out - y[i];
      for (size_t h = 0; h < s.hidden; ++h) {
        const double dh = dz * s.w2[h] * (1.0 - hidden[h] * hidden[h]);
        s.w2[h] = s.w2[h] * decay - lr * dz * hidden[h];
        double* w = s.w1.data() + h * s.inputs;
        for (size_t j = 0; j < s.inputs; ++j) {
          w[j] = w[j] * decay - lr * dh * xi[j];
        }
        s.b1[h] -= lr * dh;
      }
      s.b2 -= lr * dz;
    }
  }
  return s;
}

double KnnPredict(const KnnState& s, int k, std::span<const double> x,
                  std::vector<std::pair<double, size_t>>& scratch) {
  const size_t n = s.points.rows();
  scratch.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const auto p = s.points.row(i);
    double d = 0.0;
    for (size_t j = 0; j < p.size(); ++j) d += (p[j] - x[j]) * (p[j] - x[j]);
    scratch[i] = {d, i};
  }
  const size_t kk = std::min<size_t>(static_cast<size_t>(k), n);
  std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(kk),
                    scratch.end());
  int votes = 0;
  for (size_t i = 0; i < kk; ++i) votes += s.labels[scratch[i].second];
  return static_cast<double>(votes) / static_cast<double>(kk);
}

}  // namespace

std::string_view ToString(ModelKind kind) {
  switch (kind) {
    case ModelKind::kGbt:
      return "gbt";
    case ModelKind::kMlp:
      return "mlp";
    case ModelKind::kCart:
      return "cart";
    case ModelKind::kKnn:
      return "knn";
  }
  return "?";
}

ModelKind ParseModelKind(std::string_view name) {
  for (const ModelKind kind : kAllModelKinds) {
    if (ToString(kind) == name) return kind;
  }
  throw InvalidArgument("unknown model kind: '" + std::string(name) +
                        "' (expected gbt, mlp, cart or knn)");
}

ModelKind KindOf(const Hyperparameters& params) {
  return std::visit(Overloaded{
                        [](const GbtParams&) { return ModelKind::kGbt; },
                        [](const MlpParams&) { return ModelKind::kMlp; },
                        [](const CartParams&) { return ModelKind::kCart; },
                        [](const KnnParams&) { return ModelKind::kKnn; },
                    },
                    params);
}

std::string Describe(const Hyperparameters& params) {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const GbtParams& p) {
                   out << "rounds=" << p.num_rounds << " depth=" << p.max_depth
                       << " lr=" << p.learning_rate;
                 },
                 [&](const MlpParams& p) {
                   out << "hidden=" << p.hidden_units << " epochs=" << p.epochs
                       << " lr=" << p.learning_rate;
                 },
                 [&](const CartParams& p) {
                   out << "depth=";
                   if (p.max_depth > 0) {
                     out << p.max_depth;
                   } else {
                     out << "none";
                   }
                 },
                 [&](const KnnParams& p) { out << "k=" << p.k; },
             },
             params);
  return out.str();
}

CVConfig CVConfig::Default() {
  CVConfig cv;
  for (const int rounds : {50, 100, 200}) {
    for (const int depth : {2, 3}) {
      GbtParams p;
      p.num_rounds = rounds;
      p.max_depth = depth;
      cv.gbt_grid.push_back(p);
    }
  }
  for (const int hidden : {8, 16, 32}) {
    MlpParams p;
    p.hidden_units = hidden;
    cv.mlp_grid.push_back(p);
  }
  for (const int depth : {3, 5, 7, 0}) cv.cart_grid.push_back({depth, 1});
  for (const int k : {3, 5, 7, 11}) cv.knn_grid.push_back({k});
  return cv;
}

std::vector<Hyperparameters> CVConfig::Grid(ModelKind kind) const {
  std::vector<Hyperparameters> out;
  auto append = [&](const auto& grid) {
    for (const auto& p : grid) out.emplace_back(p);
  };
  switch (kind) {
    case ModelKind::kGbt:
      append(gbt_grid);
      break;
    case ModelKind::kMlp:
      append(mlp_grid);
      break;
    case ModelKind::kCart:
      append(cart_grid);
      break;
    case ModelKind::kKnn:
      append(knn_grid);
      break;
  }
  return out;
}

TrainedModel::TrainedModel(ModelKind kind, Hyperparameters params,
                           size_t num_features, FittedState state,
                           TrainingInfo info)
    : kind_(kind),
      params_(std::move(params)),
      num_features_(num_features),
      state_(std::move(state)),
      info_(std::move(info)) {}

std::vector<double> TrainedModel::PredictProba(const Matrix& features) const {
  if (features.cols() != num_features_) {
    throw InvalidArgument("PredictProba: model expects " +
                          std::to_string(num_features_) + " features, got " +
                          std::to_string(features.cols()));
  }
  const size_t n = features.rows();
  std::vector<double> out(n);
  std::visit(
      Overloaded{
          [&](const GbtState& s) {
            for (size_t i = 0; i < n; ++i) {
              double margin = s.base_score;
              for (const auto& tree : s.trees) {
                margin += tree.Predict(features.row(i));
              }
              out[i] = Sigmoid(margin);
            }
          },
          [&](const MlpState& s) {
            std::vector<double> hidden(s.hidden);
            for (size_t i = 0; i < n; ++i) {
              out[i] = MlpForward(s, features.row(i), hidden);
            }
          },
          [&](const CartState& s) {
            for (size_t i = 0; i < n; ++i) {
              out[i] = s.tree.Predict(features.row(i));
            }
          },
          [&](const KnnState& s) {
            const int k = std::get<KnnParams>(params_).k;
            std::vector<std::pair<double, size_t>> scratch;
            for (size_t i = 0; i < n; ++i) {
              out[i] = KnnPredict(s, k, features.row(i), scratch);
            }
          },
          [&](const ConstantState& s) {
            std::fill(out.begin(), out.end(), s.probability);
          },
      },
      state_);
  return out;
}

TrainedModel Fit(const Hyperparameters& params, const Dataset& train,
                 uint64_t seed) {
  const Matrix& x = train.features();
  const std::span<const int> y = train.labels();
  TrainingInfo info;
  info.seed = seed;
  FittedState state = std::visit(
      Overloaded{
          [&](const GbtParams& p) -> FittedState {
            return FitGbt(p, x, y, &info.loss_trace);
          },
          [&](const MlpParams& p) -> FittedState {
            return FitMlp(p, x, y, seed);
          },
          [&](const CartParams& p) -> FittedState {
            GiniTreeOptions options;
            options.max_depth = p.max_depth;
            options.min_samples_leaf = static_cast<size_t>(p.min_samples_leaf);
            return CartState{FitGiniTree(x, y, options)};
          },
          [&](const KnnParams&) -> FittedState {
            return KnnState{x, std::vector<int>(y.begin(), y.end())};
          },
      },
      params);
  return TrainedModel(KindOf(params), params, train.num_features(),
                      std::move(state), std::move(info));
}

TrainedModel FitConstant(std::span<const int> labels, size_t num_features) {
  return TrainedModel(ModelKind::kCart, CartParams{}, num_features,
                      ConstantState{PositiveShare(labels)}, TrainingInfo{});
}

std::vector<int> StratifiedFolds(std::span<const int> labels, int folds,
                                 uint64_t seed) {
  if (folds < 2) throw InvalidArgument("StratifiedFolds: folds must be >= 2");
  std::vector<int> fold(labels.size(), 0);
  Rng rng(MixSeed(seed, "folds"));
  int next = 0;
  for (int label = 0; label < 2; ++label) {
    std::vector<size_t> rows;
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == label) rows.push_back(i);
    }
    rng.Shuffle(rows);
    // Continue dealing where the previous class stopped so fold sizes stay
    // balanced overall.
    for (const size_t r : rows) {
      fold[r] = next;
      next = (next + 1) % folds;
    }
  }
  return fold;
}

TrainedModel Train(ModelKind kind, const Dataset& train, const CVConfig& cv,
                   uint64_t seed) {
  if (train.CountLabel(0) == 0 || train.CountLabel(1) == 0) {
    throw InvalidArgument("Train: degenerate training data (single class)");
  }
  if (cv.folds < 2) throw InvalidArgument("Train: CV folds must be >= 2");
  const auto grid = cv.Grid(kind);
  if (grid.empty()) {
    throw InvalidArgument("Train: empty hyperparameter grid for " +
                          std::string(ToString(kind)));
  }

  const auto fold = StratifiedFolds(train.labels(), cv.folds, seed);
  std::vector<std::vector<size_t>> fit_rows(cv.folds), holdout_rows(cv.folds);
  for (size_t i = 0; i < fold.size(); ++i) {
    for (int f = 0; f < cv.folds; ++f) {
      (fold[i] == f ? holdout_rows : fit_rows)[f].push_back(i);
    }
  }

  std::vector<CandidateScore> scores;
  size_t best = 0;
  for (size_t c = 0; c < grid.size(); ++c) {
    double total = 0.0;
    for (int f = 0; f < cv.folds; ++f) {
      const Dataset fit_part = train.SelectRows(fit_rows[f]);
      const Dataset holdout = train.SelectRows(holdout_rows[f]);
      const TrainedModel model =
          Fit(grid[c], fit_part, MixSeed(seed, static_cast<uint64_t>(f)));
      total += RocAuc(holdout.labels(), model.PredictProba(holdout.features()));
    }
    scores.push_back({grid[c], total / cv.folds});
    if (scores[c].mean_auc > scores[best].mean_auc) best = c;
  }

  TrainedModel refit = Fit(grid[best], train, seed);
  TrainingInfo info = refit.info();
  info.cv_auc = scores[best].mean_auc;
  info.candidates = std::move(scores);
  return TrainedModel(kind, grid[best], train.num_features(), refit.state(),
                      std::move(info));
}

MetricReport Evaluate(const Classifier& model, const Dataset& test) {
  return ComputeMetrics(test.labels(), model.PredictProba(test.features()));
}

std::string SerializeModel(const TrainedModel& model) {
  return ModelToJson(model).dump(1);
}

TrainedModel DeserializeModel(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("model file is not valid JSON: ") +
                          e.what());
  }
  return ModelFromJson(j);
}

void SaveModel(const TrainedModel& model, const std::filesystem::path& path) {
  WriteTextFile(path, SerializeModel(model) + "\n");
}

TrainedModel LoadModel(const std::filesystem::path& path) {
  return DeserializeModel(ReadTextFile(path));
}

}  // namespace xaibench
