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

#ifndef XAIBENCH_MATRIX_H_
#define XAIBENCH_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace xaibench {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  // Builds from nested rows; every row must have the same length.
  static Matrix FromRows(const std::vector<std::vector<double>>& rows);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(size_t r, size_t c) { return values_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const {
    return values_[r * cols_ + c];
  }

  std::span<double> row(size_t r) {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<const double> row(size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }

  std::vector<double> column(size_t c) const;
  void set_column(size_t c, std::span<const double> values);

  // Copy of the selected rows, in the given order.
  Matrix SelectRows(std::span<const size_t> indices) const;

  // Copy without column `c`.
  Matrix DropColumn(size_t c) const;

  std::span<const double> data() const { return values_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> values_;
};

}  // namespace xaibench

#endif  // XAIBENCH_MATRIX_H_
