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

// Tabular binary-classification datasets: CSV ingestion, z-score
// standardization, stratified splitting and the test-set perturbation engine.

#ifndef XAIBENCH_DATA_H_
#define XAIBENCH_DATA_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "xaibench/matrix.h"

namespace xaibench {

// Feature matrix + 0/1 labels + feature names. Immutable once built; the
// constructor enforces N >= 2, M >= 1, labels in {0, 1}, finite cells and
// unique feature names.
class Dataset {
 public:
  Dataset(Matrix features, std::vector<int> labels,
          std::vector<std::string> feature_names,
          std::string label_name = "class");

  const Matrix& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }
  const std::string& label_name() const { return label_name_; }
  // Label value treated as the positive class.
  static constexpr int kPositiveLabel = 1;

  size_t num_rows() const { return features_.rows(); }
  size_t num_features() const { return features_.cols(); }

  // Count of rows whose label equals `label`.
  size_t CountLabel(int label) const;

  // Same labels and names, new feature values (same shape).
  Dataset WithFeatures(Matrix features) const;
  Dataset SelectRows(std::span<const size_t> indices) const;
  Dataset DropFeature(size_t feature) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  Matrix features_;
  std::vector<int> labels_;
  std::vector<std::string> feature_names_;
  std::string label_name_;
};

// Reads a comma-separated file with a header row. All cells must be numeric;
// the last column is the 0/1 class.
Dataset LoadCsv(const std::filesystem::path& path);
Dataset ParseCsv(std::string_view text, std::string_view source = "<memory>");

// Inverse of ParseCsv: same schema, doubles printed round-trip exact.
std::string ToCsv(const Dataset& data);
void WriteCsv(const Dataset& data, const std::filesystem::path& path);

inline constexpr double kStddevEpsilon = 1e-12;

struct StandardizationStats {
  std::vector<double> mean;
  // Sample (N-1) standard deviation, floored at kStddevEpsilon.
  std::vector<double> stddev;

  friend bool operator==(const StandardizationStats&,
                         const StandardizationStats&) = default;
};

StandardizationStats ZScoreFit(const Dataset& train);
Dataset ZScoreApply(const Dataset& data, const StandardizationStats& stats);
Dataset ZScoreInvert(const Dataset& data, const StandardizationStats& stats);

struct SplitResult {
  Dataset train;
  Dataset test;
  // Original row indices of each side, ascending.
  std::vector<size_t> train_rows;
  std::vector<size_t> test_rows;
};

// Stratified split. The training side holds round(train_fraction * N) rows;
// per-class quotas use largest-remainder apportionment, so each class is off
// its exact share by less than one row. Both sides keep the original row
// order. Throws if a class has fewer than two rows.
SplitResult Split(const Dataset& data, double train_fraction, uint64_t seed);

enum class PerturbationKind { kNoise, kPermutation };

std::string_view ToString(PerturbationKind kind);
PerturbationKind ParsePerturbationKind(std::string_view name);

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::kPermutation;
  // Share of rows (permutation) or noise strength (noise), in [0, 1].
  double fraction = 0.0;
  // Noise standard deviation at fraction 1, in column standard deviations.
  // Ignored by the permutation kind.
  double noise_scale = 1.0;
  uint64_t seed = 0;
};

// ceil(fraction * num_rows), robust to representation error such as
// 0.1 * 230 = 23.000000000000004.
size_t PerturbedRowCount(size_t num_rows, double fraction);

// Permutation: picks PerturbedRowCount rows at random and, independently for
// every feature, shuffles that column's values among the picked rows.
// Noise: adds N(0, (fraction * noise_scale * column_stddev)^2) to every cell.
// Labels are never touched; fraction 0 returns the input unchanged.
Dataset Perturb(const Dataset& test, const PerturbationSpec& spec);

}  // namespace xaibench

#endif  // XAIBENCH_DATA_H_
