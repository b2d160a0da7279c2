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

#include "xaibench/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "format_util.h"
#include "json_io.h"
#include "xaibench/error.h"

namespace xaibench {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> SplitList(std::string_view text) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = text.find(',');
    const auto item = Trim(text.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view text) {
  text = Trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InvalidArgument("config key '" + std::string(key) + "': '" +
                          std::string(text) + "' is not a valid number");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      throw InvalidArgument("config key '" + std::string(key) + "': value must be finite");
    }
  }
  return value;
}

std::vector<int> ParseIntList(std::string_view key, std::string_view text) {
  std::vector<int> out;
  for (const auto item : SplitList(text)) out.push_back(ParseNumber<int>(key, item));
  if (out.empty()) {
    throw InvalidArgument("config key '" + std::string(key) + "' needs at least one value");
  }
  return out;
}

template <typename T>
std::string JoinList(const std::vector<T>& values) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += FormatShortest(values[i]);
    } else if constexpr (std::is_arithmetic_v<T>) {
      out += std::to_string(values[i]);
    } else {
      out += ToString(values[i]);
    }
  }
  return out;
}

template <typename Kind, typename Parse>
std::vector<Kind> ParseKinds(std::string_view key, std::string_view text, Parse parse) {
  std::vector<Kind> out;
  for (const auto item : SplitList(text)) {
    const Kind kind = parse(item);
    if (std::find(out.begin(), out.end(), kind) != out.end()) {
      throw InvalidArgument("config key '" + std::string(key) + "' lists '" +
                            std::string(item) + "' twice");
    }
    out.push_back(kind);
  }
  if (out.empty()) {
    throw InvalidArgument("config key '" + std::string(key) + "' needs at least one value");
  }
  return out;
}

}  // namespace

CVConfig RunConfig::Cv() const {
  CVConfig cv;
  cv.folds = cv_folds;
  for (const int rounds : gbt_rounds) {
    for (const int depth : gbt_depths) {
      GbtParams p;
      p.num_rounds = rounds;
      p.max_depth = depth;
      p.learning_rate = gbt_learning_rate;
      cv.gbt_grid.push_back(p);
    }
  }
  for (const int hidden : mlp_hidden) {
    MlpParams p;
    p.hidden_units = hidden;
    p.epochs = mlp_epochs;
    p.learning_rate = mlp_learning_rate;
    cv.mlp_grid.push_back(p);
  }
  for (const int depth : cart_depths) cv.cart_grid.push_back({depth, 1});
  for (const int k : knn_k) cv.knn_grid.push_back({k});
  return cv;
}

void RunConfig::Validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgument("train-fraction must lie in (0, 1)");
  }
  if (levels.empty() || levels.front() != 0.0) {
    throw InvalidArgument("levels must include 0 (the unperturbed baseline)");
  }
  if (levels.back() > 1.0) throw InvalidArgument("levels must lie in [0, 1]");
  if (models.empty()) throw InvalidArgument("at least one model is required");
  if (explainers.empty()) throw InvalidArgument("at least one explainer is required");
  if (noise_scale < 0.0) throw InvalidArgument("noise-scale must be >= 0");
  if (cv_folds < 2) throw InvalidArgument("cv-folds must be >= 2");
  if (explainer.repetitions < 1) throw InvalidArgument("repetitions must be >= 1");
  if (explainer.lofo_folds < 2) throw InvalidArgument("lofo-folds must be >= 2");
  if (explainer.bootstrap_respondents < 0) {
    throw InvalidArgument("bootstrap-respondents must be >= 0");
  }
  auto positive = [](const std::vector<int>& v, std::string_view key) {
    for (const int x : v) {
      if (x < 1) throw InvalidArgument(std::string(key) + " values must be >= 1");
    }
  };
  positive(gbt_rounds, "gbt-rounds");
  positive(gbt_depths, "gbt-depths");
  positive(mlp_hidden, "mlp-hidden");
  positive(knn_k, "knn-k");
  for (const int d : cart_depths) {
    if (d < 0) throw InvalidArgument("cart-depths values must be >= 0");
  }
  if (mlp_epochs < 1) throw InvalidArgument("mlp-epochs must be >= 1");
}

const std::vector<std::string_view>& ConfigKeys() {
  static const std::vector<std::string_view> keys = {
      "dataset",          "out",
      "seed",             "train-fraction",
      "perturbation-kind", "noise-scale",
      "levels",           "models",
      "explainers",       "cv-folds",
      "gbt-rounds",       "gbt-depths",
      "gbt-learning-rate", "mlp-hidden",
      "mlp-epochs",       "mlp-learning-rate",
      "cart-depths",      "knn-k",
      "repetitions",      "coalition-budget",
      "exact-max-features", "bootstrap-respondents",
      "lofo-folds",       "irt-max-outer",
      "irt-tolerance",
  };
  return keys;
}

std::vector<double> ParseLevels(std::string_view text) {
  std::vector<double> levels;
  for (auto item : SplitList(text)) {
    const bool percent = item.ends_with('%');
    if (percent) item.remove_suffix(1);
    double value = ParseNumber<double>("levels", item);
    if (percent) value /= 100.0;
    if (value < 0.0 || value > 1.0) {
      throw InvalidArgument("config key 'levels': " + std::string(item) +
                            (percent ? "%" : "") + " is outside [0, 1]");
    }
    levels.push_back(value);
  }
  if (levels.empty()) throw InvalidArgument("config key 'levels' needs at least one value");
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

void ApplyConfigValue(RunConfig& c, std::string_view key, std::string_view value) {
  value = Trim(value);
  if (key == "dataset") {
    c.dataset = std::string(value);
  } else if (key == "out") {
    c.out = std::string(value);
  } else if (key == "seed") {
    c.seed = ParseNumber<uint64_t>(key, value);
  } else if (key == "train-fraction") {
    c.train_fraction = ParseNumber<double>(key, value);
  } else if (key == "perturbation-kind") {
    c.perturbation_kind = ParsePerturbationKind(value);
  } else if (key == "noise-scale") {
    c.noise_scale = ParseNumber<double>(key, value);
  } else if (key == "levels") {
    c.levels = ParseLevels(value);
  } else if (key == "models") {
    c.models = ParseKinds<ModelKind>(key, value, ParseModelKind);
  } else if (key == "explainers") {
    c.explainers = ParseKinds<ExplainerKind>(key, value, ParseExplainerKind);
  } else if (key == "cv-folds") {
    c.cv_folds = ParseNumber<int>(key, value);
  } else if (key == "gbt-rounds") {
    c.gbt_rounds = ParseIntList(key, value);
  } else if (key == "gbt-depths") {
    c.gbt_depths = ParseIntList(key, value);
  } else if (key == "gbt-learning-rate") {
    c.gbt_learning_rate = ParseNumber<double>(key, value);
  } else if (key == "mlp-hidden") {
    c.mlp_hidden = ParseIntList(key, value);
  } else if (key == "mlp-epochs") {
    c.mlp_epochs = ParseNumber<int>(key, value);
  } else if (key == "mlp-learning-rate") {
    c.mlp_learning_rate = ParseNumber<double>(key, value);
  } else if (key == "cart-depths") {
    c.cart_depths = ParseIntList(key, value);
  } else if (key == "knn-k") {
    c.knn_k = ParseIntList(key, value);
  } else if (key == "repetitions") {
    c.explainer.repetitions = ParseNumber<int>(key, value);
  } else if (key == "coalition-budget") {
    c.explainer.coalition_budget = ParseNumber<size_t>(key, value);
  } else if (key == "exact-max-features") {
    c.explainer.exact_max_features = ParseNumber<size_t>(key, value);
  } else if (key == "bootstrap-respondents") {
    c.explainer.bootstrap_respondents = ParseNumber<int>(key, value);
  } else if (key == "lofo-folds") {
    c.explainer.lofo_folds = ParseNumber<int>(key, value);
  } else if (key == "irt-max-outer") {
    c.explainer.irt.max_outer = ParseNumber<int>(key, value);
  } else if (key == "irt-tolerance") {
    c.explainer.irt.tolerance = ParseNumber<double>(key, value);
  } else {
    throw InvalidArgument("unknown config key '" + std::string(key) + "'");
  }
}

RunConfig ParseConfigText(std::string_view text, std::string_view source,
                          RunConfig base) {
  size_t line_number = 0;
  while (!text.empty()) {
    ++line_number;
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text.remove_prefix(newline == std::string_view::npos ? text.size() : newline + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = std::string(source) + ":" + std::to_string(line_number);
    if (eq == std::string_view::npos) {
      throw InvalidArgument(where + ": expected 'key = value'");
    }
    try {
      ApplyConfigValue(base, Trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(where + ": " + e.what());
    }
  }
  return base;
}

RunConfig LoadConfigFile(const std::filesystem::path& path, RunConfig base) {
  std::string text;
  try {
    text = ReadTextFile(path);
  } catch (const Failure& e) {
    throw InvalidArgument(std::string("config file: ") + e.what());
  }
  return ParseConfigText(text, path.string(), std::move(base));
}

std::vector<std::pair<std::string, std::string>> ConfigEntries(const RunConfig& c) {
  const ExplainerConfig& e = c.explainer;
  return {
      {"dataset", c.dataset.string()},
      {"seed", std::to_string(c.seed)},
      {"train-fraction", FormatShortest(c.train_fraction)},
      {"perturbation-kind", std::string(ToString(c.perturbation_kind))},
      {"noise-scale", FormatShortest(c.noise_scale)},
      {"levels", JoinList(c.levels)},
      {"models", JoinList(c.models)},
      {"explainers", JoinList(c.explainers)},
      {"cv-folds", std::to_string(c.cv_folds)},
      {"gbt-rounds", JoinList(c.gbt_rounds)},
      {"gbt-depths", JoinList(c.gbt_depths)},
      {"gbt-learning-rate", FormatShortest(c.gbt_learning_rate)},
      {"mlp-hidden", JoinList(c.mlp_hidden)},
      {"mlp-epochs", std::to_string(c.mlp_epochs)},
      {"mlp-learning-rate", FormatShortest(c.mlp_learning_rate)},
      {"cart-depths", JoinList(c.cart_depths)},
      {"knn-k", JoinList(c.knn_k)},
      {"repetitions", std::to_string(e.repetitions)},
      {"coalition-budget", std::to_string(e.coalition_budget)},
      {"exact-max-features", std::to_string(e.exact_max_features)},
      {"bootstrap-respondents", std::to_string(e.bootstrap_respondents)},
      {"lofo-folds", std::to_string(e.lofo_folds)},
      {"irt-max-outer", std::to_string(e.irt.max_outer)},
      {"irt-tolerance", FormatShortest(e.irt.tolerance)},
  };
}

}  // namespace xaibench
