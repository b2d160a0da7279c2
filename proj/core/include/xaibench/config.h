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

// Run configuration and its flat `key = value` file format.
//
//   # comment
//   dataset = data/pima.csv
//   models = gbt,cart
//   levels = 0,4%,6%,10%
//
// Keys mirror the command-line flags (see ConfigKeys()). List values are
// comma separated; levels accept fractions (0.04) or percentages (4%).

#ifndef XAIBENCH_CONFIG_H_
#define XAIBENCH_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xaibench/data.h"
#include "xaibench/explainers.h"
#include "xaibench/models.h"

namespace xaibench {

inline constexpr uint64_t kDefaultSeed = 7;

struct RunConfig {
  std::filesystem::path dataset;
  std::filesystem::path out = "xaibench-out";
  uint64_t seed = kDefaultSeed;
  double train_fraction = 0.7;
  PerturbationKind perturbation_kind = PerturbationKind::kPermutation;
  double noise_scale = 1.0;
  // Must contain 0, the unperturbed baseline. Kept sorted and unique.
  std::vector<double> levels = {0.0, 0.04, 0.06, 0.10};
  std::vector<ModelKind> models{kAllModelKinds.begin(), kAllModelKinds.end()};
  std::vector<ExplainerKind> explainers{kAllExplainerKinds.begin(),
                                        kAllExplainerKinds.end()};

  // Hyperparameter grids; the full cross product is searched.
  int cv_folds = 4;
  std::vector<int> gbt_rounds = {50, 100, 200};
  std::vector<int> gbt_depths = {2, 3};
  double gbt_learning_rate = 0.1;
  std::vector<int> mlp_hidden = {8, 16, 32};
  int mlp_epochs = 100;
  double mlp_learning_rate = 0.01;
  std::vector<int> cart_depths = {3, 5, 7, 0};  // 0 = unlimited
  std::vector<int> knn_k = {3, 5, 7, 11};

  // explainer.seed is ignored; per-cell seeds derive from `seed`.
  ExplainerConfig explainer;

  CVConfig Cv() const;
  // Throws InvalidArgument on an unusable combination.
  void Validate() const;
};

// Every recognised key, in canonical order.
const std::vector<std::string_view>& ConfigKeys();

// Throws InvalidArgument naming the key on an unknown key or bad value.
void ApplyConfigValue(RunConfig& config, std::string_view key,
                      std::string_view value);

// Applies every line of `text` on top of `base`.
RunConfig ParseConfigText(std::string_view text, std::string_view source,
                          RunConfig base = {});
RunConfig LoadConfigFile(const std::filesystem::path& path, RunConfig base = {});

// Canonical key/value echo of everything that influences results (the
// output directory is left out).
std::vector<std::pair<std::string, std::string>> ConfigEntries(
    const RunConfig& config);

// "0,4%,0.06" -> {0, 0.04, 0.06}, sorted and de-duplicated.
std::vector<double> ParseLevels(std::string_view text);

}  // namespace xaibench

#endif  // XAIBENCH_CONFIG_H_
