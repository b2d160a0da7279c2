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

#include "xaibench/tree.h"

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>

namespace xaibench {
namespace {

constexpr double kMinGain = 1e-12;

struct Split {
  int32_t feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

double Midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return mid < hi ? mid : lo;
}

// Scans every feature in sorted order, accumulating row statistics left to
// right. `score` returns the gain of a partition, or nullopt when the
// partition is not admissible. Ties keep the lowest feature and threshold.
template <typename Stats, typename RowStats, typename Scorer>
Split BestSplit(const Matrix& x, std::span<const size_t> rows,
                const Stats& total, RowStats row_stats, Scorer score) {
  Split best;
  std::vector<size_t> order(rows.begin(), rows.end());
  for (size_t f = 0; f < x.cols(); ++f) {
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return x(a, f) < x(b, f);
    });
    Stats left{};
    for (size_t i = 0; i + 1 < order.size(); ++i) {
      left += row_stats(order[i]);
      const double lo = x(order[i], f);
      const double hi = x(order[i + 1], f);
      if (!(lo < hi)) continue;
      Stats right = total;
      right -= left;
      const auto gain = score(left, right, total);
      if (gain && *gain > best.gain + kMinGain) {
        best = {static_cast<int32_t>(f), Midpoint(lo, hi), *gain};
      }
    }
  }
  return best;
}

template <typename Stats, typename RowStats, typename Scorer, typename Leaf,
          typename StopEarly>
DecisionTree Grow(const Matrix& x, size_t num_rows, int max_depth,
                  RowStats row_stats, Scorer score, Leaf leaf_value,
                  StopEarly stop_early) {
  DecisionTree tree;
  std::vector<size_t> all(num_rows);
  std::iota(all.begin(), all.end(), size_t{0});

  std::function<int32_t(std::vector<size_t>&, int)> build =
      [&](std::vector<size_t>& rows, int depth) -> int32_t {
    Stats total{};
    for (const size_t r : rows) total += row_stats(r);
    const auto id = static_cast<int32_t>(tree.nodes.size());
    tree.nodes.push_back({});
    tree.nodes[id].value = leaf_value(total);
    if ((max_depth > 0 && depth >= max_depth) || rows.size() < 2 ||
        stop_early(total)) {
      return id;
    }
    const Split split = BestSplit<Stats>(x, rows, total, row_stats, score);
    if (split.feature < 0) return id;

    std::vector<size_t> left_rows;
    std::vector<size_t> right_rows;
    for (const size_t r : rows) {
      (x(r, split.feature) <= split.threshold ? left_rows : right_rows)
          .push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int32_t left = build(left_rows, depth + 1);
    const int32_t right = build(right_rows, depth + 1);
    auto& node = tree.nodes[id];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    return id;
  };
  build(all, 0);
  return tree;
}

struct ClassCounts {
  double n = 0.0;
  double positives = 0.0;
  ClassCounts& operator+=(const ClassCounts& o) {
    n += o.n;
    positives += o.positives;
    return *this;
  }
  ClassCounts& operator-=(const ClassCounts& o) {
    n -= o.n;
    positives -= o.positives;
    return *this;
  }
  // n * gini
  double WeightedImpurity() const {
    return n > 0.0 ? 2.0 * positives * (n - positives) / n : 0.0;
  }
};

struct GradStats {
  double g = 0.0;
  double h = 0.0;
  GradStats& operator+=(const GradStats& o) {
    g += o.g;
    h += o.h;
    return *this;
  }
  GradStats& operator-=(const GradStats& o) {
    g -= o.g;
    h -= o.h;
    return *this;
  }
};

}  // namespace

double DecisionTree::Predict(std::span<const double> x) const {
  int32_t id = 0;
  while (nodes[id].feature >= 0) {
    const auto& node = nodes[id];
    id = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  return nodes[id].value;
}

int DecisionTree::Depth() const {
  std::function<int(int32_t)> depth = [&](int32_t id) -> int {
    if (nodes[id].feature < 0) return 0;
    return 1 + std::max(depth(nodes[id].left), depth(nodes[id].right));
  };
  return nodes.empty() ? 0 : depth(0);
}

bool DecisionTree::UsesFeature(size_t feature) const {
  return std::any_of(nodes.begin(), nodes.end(), [&](const Node& n) {
    return n.feature == static_cast<int32_t>(feature);
  });
}

DecisionTree FitGiniTree(const Matrix& x, std::span<const int> labels,
                         const GiniTreeOptions& options) {
  const double min_leaf = static_cast<double>(options.min_samples_leaf);
  auto row_stats = [&](size_t r) {
    return ClassCounts{1.0, static_cast<double>(labels[r])};
  };
  auto score = [&](const ClassCounts& l, const ClassCounts& r,
                   const ClassCounts& parent) -> std::optional<double> {
    if (l.n < min_leaf || r.n < min_leaf) return std::nullopt;
    return parent.WeightedImpurity() - l.WeightedImpurity() -
           r.WeightedImpurity();
  };
  auto leaf = [](const ClassCounts& s) {
    return s.n > 0.0 ? s.positives / s.n : 0.0;
  };
  auto pure = [](const ClassCounts& s) {
    return s.positives == 0.0 || s.positives == s.n;
  };
  return Grow<ClassCounts>(x, x.rows(), options.max_depth, row_stats, score,
                           leaf, pure);
}

DecisionTree FitGradientTree(const Matrix& x, std::span<const double> grad,
                             std::span<const double> hess,
                             const GradientTreeOptions& options) {
  auto row_stats = [&](size_t r) { return GradStats{grad[r], hess[r]}; };
  auto objective = [&](const GradStats& s) {
    return s.g * s.g / (s.h + options.l2);
  };
  auto score = [&](const GradStats& l, const GradStats& r,
                   const GradStats& parent) -> std::optional<double> {
    if (l.h < options.min_child_hessian || r.h < options.min_child_hessian) {
      return std::nullopt;
    }
    return 0.5 * (objective(l) + objective(r) - objective(parent));
  };
  auto leaf = [&](const GradStats& s) { return -s.g / (s.h + options.l2); };
  auto never = [](const GradStats&) { return false; };
  return Grow<GradStats>(x, x.rows(), options.max_depth, row_stats, score,
                         leaf, never);
}

}  // namespace xaibench
