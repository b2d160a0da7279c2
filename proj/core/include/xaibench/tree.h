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

#ifndef XAIBENCH_TREE_H_
#define XAIBENCH_TREE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "xaibench/matrix.h"

namespace xaibench {

// Binary tree with axis-aligned splits `x[feature] <= threshold` (go left).
// Node 0 is the root. Leaves have feature == -1.
struct DecisionTree {
  struct Node {
    int32_t feature = -1;
    double threshold = 0.0;
    int32_t left = -1;
    int32_t right = -1;
    double value = 0.0;

    friend bool operator==(const Node&, const Node&) = default;
  };

  std::vector<Node> nodes;

  double Predict(std::span<const double> x) const;
  int Depth() const;
  bool UsesFeature(size_t feature) const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

// max_depth <= 0 means unlimited.
struct GiniTreeOptions {
  int max_depth = 0;
  size_t min_samples_leaf = 1;
};

// CART classification tree on Gini impurity; leaf value = share of label 1.
DecisionTree FitGiniTree(const Matrix& x, std::span<const int> labels,
                         const GiniTreeOptions& options);

struct GradientTreeOptions {
  int max_depth = 3;
  double l2 = 1.0;
  double min_child_hessian = 1e-3;
};

// Second-order regression tree: leaf value = -G / (H + l2).
DecisionTree FitGradientTree(const Matrix& x, std::span<const double> grad,
                             std::span<const double> hess,
                             const GradientTreeOptions& options);

}  // namespace xaibench

#endif  // XAIBENCH_TREE_H_
