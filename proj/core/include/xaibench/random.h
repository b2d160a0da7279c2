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

// Portable pseudo-random helpers.
//
// The standard distributions (std::uniform_real_distribution,
// std::shuffle, ...) are implementation-defined, so two standard libraries
// can produce different streams from the same engine. Every randomized
// operation in this project goes through the helpers below, which only rely
// on the bit-exact std::mt19937_64 engine.

#ifndef XAIBENCH_RANDOM_H_
#define XAIBENCH_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace xaibench {

// Mixes `value` into `seed`. Stable across platforms and runs.
uint64_t MixSeed(uint64_t seed, uint64_t value);

// Mixes a label (e.g. a stage name) into `seed` using FNV-1a.
uint64_t MixSeed(uint64_t seed, std::string_view label);

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1).
  double Uniform();

  // Uniform in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n). `n` must be > 0.
  size_t Index(size_t n);

  // Standard normal (Box-Muller, no cached spare).
  double Normal();

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = Index(i);
      std::swap(values[i - 1], values[j]);
    }
  }

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    Shuffle(std::span<T>(values));
  }

  // `count` distinct indices from [0, n), in random order.
  std::vector<size_t> SampleWithoutReplacement(size_t n, size_t count);

 private:
  std::mt19937_64 engine_;
};

}  // namespace xaibench

#endif  // XAIBENCH_RANDOM_H_
