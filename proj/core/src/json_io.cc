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

#include "json_io.h"

#include <fstream>
#include <sstream>

#include "xaibench/error.h"

namespace xaibench {
namespace {

constexpr std::string_view kModelFormat = "xaibench-model";
constexpr int kModelVersion = 1;

template <typename... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <typename... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Json TreeToJson(const DecisionTree& tree) {
  Json nodes = Json::array();
  for (const auto& n : tree.nodes) {
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value});
  }
  return nodes;
}

DecisionTree TreeFromJson(const Json& j) {
  DecisionTree tree;
  for (const Json& n : j) {
    tree.nodes.push_back({n.at(0).get<int32_t>(), n.at(1).get<double>(),
                          n.at(2).get<int32_t>(), n.at(3).get<int32_t>(),
                          n.at(4).get<double>()});
  }
  const auto count = static_cast<int32_t>(tree.nodes.size());
  for (const auto& n : tree.nodes) {
    if (n.feature >= 0 && (n.left <= 0 || n.left >= count || n.right <= 0 ||
                           n.right >= count)) {
      throw InvalidArgument("model file: tree node points outside the tree");
    }
  }
  return tree;
}

Json ParamsToJson(const Hyperparameters& params) {
  return std::visit(
      Overloaded{
          [](const GbtParams& p) {
            return Json{{"num_rounds", p.num_rounds},
                        {"max_depth", p.max_depth},
                        {"learning_rate", p.learning_rate},
                        {"l2", p.l2}};
          },
          [](const MlpParams& p) {
            return Json{{"hidden_units", p.hidden_units},
                        {"epochs", p.epochs},
                        {"learning_rate", p.learning_rate},
                        {"weight_decay", p.weight_decay}};
          },
          [](const CartParams& p) {
            return Json{{"max_depth", p.max_depth},
                        {"min_samples_leaf", p.min_samples_leaf}};
          },
          [](const KnnParams& p) { return Json{{"k", p.k}}; },
      },
      params);
}

Hyperparameters ParamsFromJson(ModelKind kind, const Json& j) {
  switch (kind) {
    case ModelKind::kGbt:
      return GbtParams{j.at("num_rounds"), j.at("max_depth"),
                       j.at("learning_rate"), j.at("l2")};
    case ModelKind::kMlp:
      return MlpParams{j.at("hidden_units"), j.at("epochs"),
                       j.at("learning_rate"), j.at("weight_decay")};
    case ModelKind::kCart:
      return CartParams{j.at("max_depth"), j.at("min_samples_leaf")};
    case ModelKind::kKnn:
      return KnnParams{j.at("k")};
  }
  throw InvalidArgument("model file: unknown kind");
}

Json StateToJson(const FittedState& state) {
  return std::visit(
      Overloaded{
          [](const GbtState& s) {
            Json trees = Json::array();
            for (const auto& t : s.trees) trees.push_back(TreeToJson(t));
            return Json{{"type", "gbt"}, {"base_score", s.base_score}, {"trees", trees}};
          },
          [](const MlpState& s) {
            return Json{{"type", "mlp"}, {"inputs", s.inputs}, {"hidden", s.hidden},
                        {"w1", s.w1}, {"b1", s.b1}, {"w2", s.w2}, {"b2", s.b2}};
          },
          [](const CartState& s) {
            return Json{{"type", "cart"}, {"tree", TreeToJson(s.tree)}};
          },
          [](const KnnState& s) {
            return Json{{"type", "knn"}, {"points", MatrixToJson(s.points)},
                        {"labels", s.labels}};
          },
          [](const ConstantState& s) {
            return Json{{"type", "constant"}, {"probability", s.probability}};
          },
      },
      state);
}

FittedState StateFromJson(const Json& j) {
  const std::string type = j.at("type");
  if (type == "gbt") {
    GbtState s;
    s.base_score = j.at("base_score");
    for (const Json& t : j.at("trees")) s.trees.push_back(TreeFromJson(t));
    return s;
  }
  if (type == "mlp") {
    MlpState s;
    s.inputs = j.at("inputs");
    s.hidden = j.at("hidden");
    s.w1 = j.at("w1").get<std::vector<double>>();
    s.b1 = j.at("b1").get<std::vector<double>>();
    s.w2 = j.at("w2").get<std::vector<double>>();
    s.b2 = j.at("b2");
    if (s.w1.size() != s.inputs * s.hidden || s.b1.size() != s.hidden ||
        s.w2.size() != s.hidden) {
      throw InvalidArgument("model file: mlp weight shapes disagree");
    }
    return s;
  }
  if (type == "cart") return CartState{TreeFromJson(j.at("tree"))};
  if (type == "knn") {
    KnnState s{MatrixFromJson(j.at("points")), j.at("labels").get<std::vector<int>>()};
    if (s.labels.size() != s.points.rows()) {
      throw InvalidArgument("model file: knn labels disagree with points");
    }
    return s;
  }
  if (type == "constant") return ConstantState{j.at("probability")};
  throw InvalidArgument("model file: unknown state type '" + type + "'");
}

}  // namespace

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Failure("cannot write " + path.string());
}

Json ParseJson(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string(source) + ": not valid JSON: " + e.what());
  }
}

Json ReadJsonFile(const std::filesystem::path& path) {
  return ParseJson(ReadTextFile(path), path.string());
}

void WriteJsonFile(const std::filesystem::path& path, const Json& j) {
  WriteTextFile(path, j.dump(2) + "\n");
}

Json MatrixToJson(const Matrix& m) {
  return Json{{"rows", m.rows()}, {"cols", m.cols()},
              {"values", std::vector<double>(m.data().begin(), m.data().end())}};
}

Matrix MatrixFromJson(const Json& j) {
  const size_t rows = j.at("rows");
  const size_t cols = j.at("cols");
  const auto values = j.at("values").get<std::vector<double>>();
  if (values.size() != rows * cols) {
    throw InvalidArgument("matrix: value count disagrees with its shape");
  }
  Matrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) m(r, c) = values[r * cols + c];
  }
  return m;
}

Json ModelToJson(const TrainedModel& model) {
  Json candidates = Json::array();
  for (const auto& c : model.info().candidates) {
    candidates.push_back({{"params", ParamsToJson(c.params)}, {"mean_auc", c.mean_auc}});
  }
  return Json{
      {"format", kModelFormat},
      {"version", kModelVersion},
      {"kind", ToString(model.kind())},
      {"num_features", model.num_features()},
      {"params", ParamsToJson(model.params())},
      {"state", StateToJson(model.state())},
      {"info",
       {{"seed", model.info().seed},
        {"cv_auc", model.info().cv_auc},
        {"candidates", candidates},
        {"loss_trace", model.info().loss_trace}}},
  };
}

TrainedModel ModelFromJson(const Json& j) {
  try {
    if (j.at("format") != kModelFormat) {
      throw InvalidArgument("not an xaibench model file");
    }
    if (j.at("version") != kModelVersion) {
      throw InvalidArgument("unsupported model file version " +
                            j.at("version").dump());
    }
    const ModelKind kind = ParseModelKind(j.at("kind").get<std::string>());
    TrainingInfo info;
    const Json& ji = j.at("info");
    info.seed = ji.at("seed");
    info.cv_auc = ji.at("cv_auc");
    for (const Json& c : ji.at("candidates")) {
      info.candidates.push_back({ParamsFromJson(kind, c.at("params")), c.at("mean_auc")});
    }
    info.loss_trace = ji.at("loss_trace").get<std::vector<double>>();
    return TrainedModel(kind, ParamsFromJson(kind, j.at("params")),
                        j.at("num_features"), StateFromJson(j.at("state")),
                        std::move(info));
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("malformed model file: ") + e.what());
  }
}

void to_json(Json& j, const MetricReport& m) {
  j = Json{{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall},
           {"f1", m.f1}, {"roc_auc", m.roc_auc}};
}
void from_json(const Json& j, MetricReport& m) {
  m.accuracy = j.at("accuracy");
  m.precision = j.at("precision");
  m.recall = j.at("recall");
  m.f1 = j.at("f1");
  m.roc_auc = j.at("roc_auc");
}

void to_json(Json& j, const StandardizationStats& s) {
  j = Json{{"mean", s.mean}, {"stddev", s.stddev}};
}
void from_json(const Json& j, StandardizationStats& s) {
  s.mean = j.at("mean").get<std::vector<double>>();
  s.stddev = j.at("stddev").get<std::vector<double>>();
}

void to_json(Json& j, const RelevanceRank& r) {
  j = Json{{"explainer", ToString(r.explainer)},
           {"model", ToString(r.model_kind)},
           {"fraction", r.perturbation_fraction},
           {"features", r.ordered_features},
           {"scores", r.scores},
           {"stddev", r.score_stddev}};
}
void from_json(const Json& j, RelevanceRank& r) {
  r.explainer = ParseExplainerKind(j.at("explainer").get<std::string>());
  r.model_kind = ParseModelKind(j.at("model").get<std::string>());
  r.perturbation_fraction = j.at("fraction");
  r.ordered_features = j.at("features").get<std::vector<std::string>>();
  r.scores = j.at("scores").get<std::vector<double>>();
  r.score_stddev = j.at("stddev").get<std::vector<double>>();
}

void to_json(Json& j, const ItemParameters& p) {
  j = Json{{"a", p.a}, {"b", p.b}, {"c", p.c}};
}
void from_json(const Json& j, ItemParameters& p) {
  p.a = j.at("a").get<std::vector<double>>();
  p.b = j.at("b").get<std::vector<double>>();
  p.c = j.at("c").get<std::vector<double>>();
  if (p.b.size() != p.a.size() || p.c.size() != p.a.size()) {
    throw InvalidArgument("item parameters: a, b, c lengths differ");
  }
}

void to_json(Json& j, const IrtFit& f) {
  j = Json{{"items", f.items},
           {"theta", f.abilities.theta},
           {"log_likelihood", f.log_likelihood},
           {"trace", f.trace},
           {"iterations", f.iterations},
           {"converged", f.converged}};
}
void from_json(const Json& j, IrtFit& f) {
  f.items = j.at("items").get<ItemParameters>();
  f.abilities.theta = j.at("theta").get<std::vector<double>>();
  f.log_likelihood = j.at("log_likelihood");
  f.trace = j.at("trace").get<std::vector<double>>();
  f.iterations = j.at("iterations");
  f.converged = j.at("converged");
}

void to_json(Json& j, const ReliabilitySummary& s) {
  j = Json{{"mean_difficulty", s.mean_difficulty},
           {"mean_discrimination", s.mean_discrimination},
           {"mean_guessing", s.mean_guessing},
           {"mean_ability", s.mean_ability},
           {"negative_item_count", s.negative_item_count},
           {"item_count", s.item_count}};
}
void from_json(const Json& j, ReliabilitySummary& s) {
  s.mean_difficulty = j.at("mean_difficulty");
  s.mean_discrimination = j.at("mean_discrimination");
  s.mean_guessing = j.at("mean_guessing");
  s.mean_ability = j.at("mean_ability");
  s.negative_item_count = j.at("negative_item_count");
  s.item_count = j.at("item_count");
}

void to_json(Json& j, const StabilityRecord& r) {
  Json rho = Json::array();
  for (const auto& [fraction, value] : r.rho_by_fraction) {
    rho.push_back({{"fraction", fraction}, {"rho", value}});
  }
  j = Json{{"explainer", ToString(r.explainer)},
           {"model", ToString(r.model_kind)},
           {"rho", rho},
           {"sum", r.sum}};
}
void from_json(const Json& j, StabilityRecord& r) {
  r.explainer = ParseExplainerKind(j.at("explainer").get<std::string>());
  r.model_kind = ParseModelKind(j.at("model").get<std::string>());
  r.rho_by_fraction.clear();
  for (const Json& e : j.at("rho")) {
    r.rho_by_fraction[e.at("fraction").get<double>()] = e.at("rho").get<double>();
  }
  r.sum = j.at("sum");
}

void to_json(Json& j, const FriedmanResult& f) {
  j = Json{{"statistic", f.statistic}, {"p_value", f.p_value}, {"mean_ranks", f.mean_ranks}};
}
void from_json(const Json& j, FriedmanResult& f) {
  f.statistic = j.at("statistic");
  f.p_value = j.at("p_value");
  f.mean_ranks = j.at("mean_ranks").get<std::vector<double>>();
}

void to_json(Json& j, const PosthocMatrix& m) {
  j = Json{{"labels", m.labels}, {"p", MatrixToJson(m.p)}};
}
void from_json(const Json& j, PosthocMatrix& m) {
  m.labels = j.at("labels").get<std::vector<std::string>>();
  m.p = MatrixFromJson(j.at("p"));
}

void to_json(Json& j, const MeasurementTable& t) {
  j = Json{{"blocks", t.blocks}, {"treatments", t.treatments},
           {"values", MatrixToJson(t.values)}};
}
void from_json(const Json& j, MeasurementTable& t) {
  t.blocks = j.at("blocks").get<std::vector<std::string>>();
  t.treatments = j.at("treatments").get<std::vector<std::string>>();
  t.values = MatrixFromJson(j.at("values"));
}

void to_json(Json& j, const DatasetSummary& d) {
  j = Json{{"source", d.source},       {"rows", d.rows},
           {"features", d.features},   {"negatives", d.negatives},
           {"positives", d.positives}, {"train_rows", d.train_rows},
           {"test_rows", d.test_rows}, {"feature_names", d.feature_names}};
}
void from_json(const Json& j, DatasetSummary& d) {
  d.source = j.at("source");
  d.rows = j.at("rows");
  d.features = j.at("features");
  d.negatives = j.at("negatives");
  d.positives = j.at("positives");
  d.train_rows = j.at("train_rows");
  d.test_rows = j.at("test_rows");
  d.feature_names = j.at("feature_names").get<std::vector<std::string>>();
}

void to_json(Json& j, const ModelSummary& s) {
  j = Json{{"model", ToString(s.model)},
           {"hyperparameters", s.hyperparameters},
           {"cv_auc", s.cv_auc},
           {"seed", s.seed}};
}
void from_json(const Json& j, ModelSummary& s) {
  s.model = ParseModelKind(j.at("model").get<std::string>());
  s.hyperparameters = j.at("hyperparameters");
  s.cv_auc = j.at("cv_auc");
  s.seed = j.at("seed");
}

void to_json(Json& j, const MetricEntry& e) {
  j = Json{{"model", ToString(e.model)}, {"fraction", e.fraction}, {"metrics", e.metrics}};
}
void from_json(const Json& j, MetricEntry& e) {
  e.model = ParseModelKind(j.at("model").get<std::string>());
  e.fraction = j.at("fraction");
  e.metrics = j.at("metrics").get<MetricReport>();
}

void to_json(Json& j, const ReliabilityEntry& e) {
  j = Json{{"model", ToString(e.model)},
           {"fraction", e.fraction},
           {"summary", e.summary},
           {"items", e.items},
           {"item_ids", e.item_ids},
           {"log_likelihood", e.log_likelihood},
           {"iterations", e.iterations},
           {"converged", e.converged}};
}
void from_json(const Json& j, ReliabilityEntry& e) {
  e.model = ParseModelKind(j.at("model").get<std::string>());
  e.fraction = j.at("fraction");
  e.summary = j.at("summary").get<ReliabilitySummary>();
  e.items = j.at("items").get<ItemParameters>();
  e.item_ids = j.at("item_ids").get<std::vector<std::string>>();
  e.log_likelihood = j.at("log_likelihood");
  e.iterations = j.at("iterations");
  e.converged = j.at("converged");
}

}  // namespace xaibench
