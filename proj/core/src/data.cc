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

#include "xaibench/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "format_util.h"
#include "xaibench/error.h"
#include "xaibench/random.h"

namespace xaibench {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(Trim(line.substr(start)));
      return out;
    }
    out.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

bool ParseDouble(std::string_view cell, double* out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), *out);
  return ec == std::errc() && ptr == cell.data() + cell.size() &&
         std::isfinite(*out);
}

double SampleStddev(std::span<const double> values, double mean) {
  if (values.size() < 2) return 0.0;
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double Mean(std::span<const double> values) {
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

Dataset::Dataset(Matrix features, std::vector<int> labels,
                 std::vector<std::string> feature_names,
                 std::string label_name)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)),
      label_name_(std::move(label_name)) {
  if (features_.rows() < 2) {
    throw InvalidArgument("Dataset: at least 2 rows are required");
  }
  if (features_.cols() < 1) {
    throw InvalidArgument("Dataset: at least 1 feature is required");
  }
  if (labels_.size() != features_.rows()) {
    throw InvalidArgument("Dataset: label count does not match row count");
  }
  if (feature_names_.size() != features_.cols()) {
    throw InvalidArgument("Dataset: feature name count does not match");
  }
  for (const int label : labels_) {
    if (label != 0 && label != 1) {
      throw InvalidArgument("Dataset: labels must be 0 or 1");
    }
  }
  for (const double v : features_.data()) {
    if (!std::isfinite(v)) {
      throw InvalidArgument("Dataset: non-finite feature value");
    }
  }
  const std::set<std::string> unique(feature_names_.begin(),
                                     feature_names_.end());
  if (unique.size() != feature_names_.size()) {
    throw InvalidArgument("Dataset: feature names must be unique");
  }
}

size_t Dataset::CountLabel(int label) const {
  return static_cast<size_t>(std::count(labels_.begin(), labels_.end(), label));
}

Dataset Dataset::WithFeatures(Matrix features) const {
  if (features.rows() != num_rows() || features.cols() != num_features()) {
    throw InvalidArgument("Dataset::WithFeatures: shape mismatch");
  }
  return Dataset(std::move(features), labels_, feature_names_, label_name_);
}

Dataset Dataset::SelectRows(std::span<const size_t> indices) const {
  std::vector<int> labels(indices.size());
  for (size_t i = 0; i < indices.size(); ++i) labels[i] = labels_[indices[i]];
  return Dataset(features_.SelectRows(indices), std::move(labels),
                 feature_names_, label_name_);
}

Dataset Dataset::DropFeature(size_t feature) const {
  std::vector<std::string> names = feature_names_;
  names.erase(names.begin() + static_cast<std::ptrdiff_t>(feature));
  return Dataset(features_.DropColumn(feature), labels_, std::move(names),
                 label_name_);
}

Dataset ParseCsv(std::string_view text, std::string_view source) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && Trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) {
    throw InvalidArgument(std::string(source) + ": empty file");
  }
  // Tolerate a UTF-8 byte order mark.
  if (lines[0].starts_with("\xEF\xBB\xBF")) lines[0].remove_prefix(3);

  const auto header = SplitFields(lines[0]);
  if (header.size() < 2) {
    throw InvalidArgument(std::string(source) +
                          ": need at least 2 columns (features + class)");
  }
  const size_t num_features = header.size() - 1;
  std::vector<std::string> names(header.begin(), header.end() - 1);
  const std::string label_name(header.back());

  const size_t num_rows = lines.size() - 1;
  Matrix features(num_rows, num_features);
  std::vector<int> labels(num_rows);
  for (size_t r = 0; r < num_rows; ++r) {
    const size_t line_no = r + 2;
    const auto cells = SplitFields(lines[r + 1]);
    if (cells.size() != header.size()) {
      throw InvalidArgument(std::string(source) + ": line " +
                            std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
    }
    for (size_t c = 0; c < cells.size(); ++c) {
      double value = 0.0;
      if (!ParseDouble(cells[c], &value)) {
        throw InvalidArgument(
            std::string(source) + ": non-numeric or missing cell at line " +
            std::to_string(line_no) + ", column " + std::to_string(c + 1) +
            " (" + std::string(header[c]) + "): '" + std::string(cells[c]) +
            "'");
      }
      if (c < num_features) {
        features(r, c) = value;
      } else if (value == 0.0 || value == 1.0) {
        labels[r] = static_cast<int>(value);
      } else {
        throw InvalidArgument(std::string(source) + ": label outside {0,1} at line " +
                              std::to_string(line_no) + ": '" +
                              std::string(cells[c]) + "'");
      }
    }
  }
  return Dataset(std::move(features), std::move(labels), std::move(names),
                 label_name);
}

Dataset LoadCsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure("cannot open dataset file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseCsv(buffer.str(), path.string());
}

std::string ToCsv(const Dataset& data) {
  std::string out;
  for (const auto& name : data.feature_names()) {
    out += name;
    out += ',';
  }
  out += data.label_name();
  out += '\n';
  for (size_t r = 0; r < data.num_rows(); ++r) {
    for (const double v : data.features().row(r)) {
      out += FormatShortest(v);
      out += ',';
    }
    out += std::to_string(data.labels()[r]);
    out += '\n';
  }
  return out;
}

void WriteCsv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure("cannot write " + path.string());
  out << ToCsv(data);
  if (!out) throw Failure("write failed: " + path.string());
}

StandardizationStats ZScoreFit(const Dataset& train) {
  StandardizationStats stats;
  const size_t m = train.num_features();
  stats.mean.resize(m);
  stats.stddev.resize(m);
  for (size_t c = 0; c < m; ++c) {
    const auto column = train.features().column(c);
    stats.mean[c] = Mean(column);
    stats.stddev[c] =
        std::max(SampleStddev(column, stats.mean[c]), kStddevEpsilon);
  }
  return stats;
}

Dataset ZScoreApply(const Dataset& data, const StandardizationStats& stats) {
  if (stats.mean.size() != data.num_features() ||
      stats.stddev.size() != data.num_features()) {
    throw InvalidArgument("ZScoreApply: stats have " +
                          std::to_string(stats.mean.size()) +
                          " columns, dataset has " +
                          std::to_string(data.num_features()));
  }
  Matrix out = data.features();
  for (size_t r = 0; r < out.rows(); ++r) {
    for (size_t c = 0; c < out.cols(); ++c) {
      out(r, c) = (out(r, c) - stats.mean[c]) / stats.stddev[c];
    }
  }
  return data.WithFeatures(std::move(out));
}

Dataset ZScoreInvert(const Dataset& data, const StandardizationStats& stats) {
  if (stats.mean.size() != data.num_features() ||
      stats.stddev.size() != data.num_features()) {
    throw InvalidArgument("ZScoreInvert: dimensionality mismatch");
  }
  Matrix out = data.features();
  for (size_t r = 0; r < out.rows(); ++r) {
    for (size_t c = 0; c < out.cols(); ++c) {
      out(r, c) = out(r, c) * stats.stddev[c] + stats.mean[c];
    }
  }
  return data.WithFeatures(std::move(out));
}

SplitResult Split(const Dataset& data, double train_fraction, uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgument("Split: train_fraction must be in (0, 1)");
  }
  std::vector<size_t> by_class[2];
  for (size_t i = 0; i < data.num_rows(); ++i) {
    by_class[data.labels()[i]].push_back(i);
  }
  for (int label = 0; label < 2; ++label) {
    if (by_class[label].size() < 2) {
      throw InvalidArgument("Split: class " + std::to_string(label) +
                            " has fewer than 2 rows");
    }
  }

  const size_t n = data.num_rows();
  const auto train_total =
      static_cast<size_t>(std::llround(train_fraction * static_cast<double>(n)));
  size_t quota[2];
  double remainder[2];
  size_t assigned = 0;
  for (int label = 0; label < 2; ++label) {
    const double exact =
        train_fraction * static_cast<double>(by_class[label].size());
    quota[label] = static_cast<size_t>(std::floor(exact));
    remainder[label] = exact - std::floor(exact);
    assigned += quota[label];
  }
  // Largest remainder first; ties go to class 0.
  int order[2] = {0, 1};
  if (remainder[1] > remainder[0]) std::swap(order[0], order[1]);
  for (size_t k = 0; assigned < train_total; ++k) {
    ++quota[order[k % 2]];
    ++assigned;
  }
  // Keep at least one row of each class on each side.
  for (int label = 0; label < 2; ++label) {
    quota[label] = std::clamp<size_t>(quota[label], 1,
                                      by_class[label].size() - 1);
  }

  Rng rng(MixSeed(seed, "split"));
  SplitResult result{data, data, {}, {}};
  for (int label = 0; label < 2; ++label) {
    auto rows = by_class[label];
    rng.Shuffle(rows);
    result.train_rows.insert(result.train_rows.end(), rows.begin(),
                             rows.begin() + static_cast<std::ptrdiff_t>(quota[label]));
    result.test_rows.insert(result.test_rows.end(),
                            rows.begin() + static_cast<std::ptrdiff_t>(quota[label]),
                            rows.end());
  }
  std::sort(result.train_rows.begin(), result.train_rows.end());
  std::sort(result.test_rows.begin(), result.test_rows.end());
  result.train = data.SelectRows(result.train_rows);
  result.test = data.SelectRows(result.test_rows);
  return result;
}

std::string_view ToString(PerturbationKind kind) {
  return kind == PerturbationKind::kNoise ? "noise" : "permutation";
}

PerturbationKind ParsePerturbationKind(std::string_view name) {
  if (name == "noise") return PerturbationKind::kNoise;
  if (name == "permutation") return PerturbationKind::kPermutation;
  throw InvalidArgument("unknown perturbation kind: " + std::string(name));
}

size_t PerturbedRowCount(size_t num_rows, double fraction) {
  const double exact = fraction * static_cast<double>(num_rows);
  const auto count = static_cast<size_t>(std::ceil(exact - 1e-9));
  return std::min(count, num_rows);
}

Dataset Perturb(const Dataset& test, const PerturbationSpec& spec) {
  if (!(spec.fraction >= 0.0 && spec.fraction <= 1.0)) {
    throw InvalidArgument("Perturb: fraction must be in [0, 1]");
  }
  if (spec.fraction == 0.0) return test;

  Matrix out = test.features();
  Rng rng(MixSeed(spec.seed, ToString(spec.kind)));
  if (spec.kind == PerturbationKind::kPermutation) {
    const size_t count = PerturbedRowCount(test.num_rows(), spec.fraction);
    auto rows = rng.SampleWithoutReplacement(test.num_rows(), count);
    std::sort(rows.begin(), rows.end());
    std::vector<double> values(count);
    for (size_t c = 0; c < out.cols(); ++c) {
      for (size_t k = 0; k < count; ++k) values[k] = out(rows[k], c);
      rng.Shuffle(values);
      for (size_t k = 0; k < count; ++k) out(rows[k], c) = values[k];
    }
  } else {
    if (spec.noise_scale < 0.0) {
      throw InvalidArgument("Perturb: noise_scale must be >= 0");
    }
    for (size_t c = 0; c < out.cols(); ++c) {
      const auto column = test.features().column(c);
      const double sigma = spec.fraction * spec.noise_scale *
                           SampleStddev(column, Mean(column));
      for (size_t r = 0; r < out.rows(); ++r) out(r, c) += sigma * rng.Normal();
    }
  }
  return test.WithFeatures(std::move(out));
}

}  // namespace xaibench
