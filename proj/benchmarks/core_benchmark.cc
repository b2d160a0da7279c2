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

#include <cmath>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "xaibench/explainers.h"
#include "xaibench/irt.h"
#include "xaibench/models.h"
#include "xaibench/random.h"
#include "xaibench/stability.h"

namespace xaibench {
namespace {

ResponseMatrix SimulatedResponses(size_t respondents, size_t items, uint64_t seed) {
  Rng rng(seed);
  std::vector<double> a(items), b(items), c(items);
  for (size_t i = 0; i < items; ++i) {
    a[i] = rng.Uniform(0.8, 2.0);
    b[i] = rng.Uniform(-2.0, 2.0);
    c[i] = rng.Uniform(0.0, 0.25);
  }
  std::vector<uint8_t> u(respondents * items);
  for (size_t r = 0; r < respondents; ++r) {
    const double theta = rng.Uniform(-2.0, 2.0);
    for (size_t i = 0; i < items; ++i) {
      u[r * items + i] = rng.Uniform() < PCorrect(a[i], b[i], c[i], theta);
    }
  }
  std::vector<std::string> rid(respondents), iid(items);
  for (size_t r = 0; r < respondents; ++r) rid[r] = "r" + std::to_string(r);
  for (size_t i = 0; i < items; ++i) iid[i] = "i" + std::to_string(i);
  return ResponseMatrix(respondents, items, std::move(u), std::move(rid), std::move(iid));
}

// Respondent pool of the default exirt setup on a 230-row test set.
void BM_Fit3pl(benchmark::State& state) {
  const ResponseMatrix m =
      SimulatedResponses(static_cast<size_t>(state.range(0)), 230, 1);
  IrtFitOptions options;
  options.max_outer = 10;
  for (auto _ : state) benchmark::DoNotOptimize(Fit3pl(m, options));
}
BENCHMARK(BM_Fit3pl)->Arg(29)->Arg(100)->Unit(benchmark::kMillisecond);

class Logistic : public Classifier {
 public:
  explicit Logistic(size_t m) : m_(m) {}
  size_t num_features() const override { return m_; }
  std::vector<double> PredictProba(const Matrix& x) const override {
    std::vector<double> p(x.rows());
    for (size_t r = 0; r < x.rows(); ++r) {
      double z = 0.0;
      for (size_t j = 0; j < m_; ++j) z += (0.1 + 0.05 * j) * x(r, j);
      for (size_t j = 0; j + 1 < m_; ++j) z += 0.3 * x(r, j) * x(r, j + 1);
      p[r] = 1.0 / (1.0 + std::exp(-z));
    }
    return p;
  }

 private:
  size_t m_;
};

// Exact below 13 features, sampled (budget 2048) from 13 on.
void BM_KernelShapValues(benchmark::State& state) {
  const size_t m = static_cast<size_t>(state.range(0));
  const Logistic model(m);
  Rng rng(2);
  std::vector<double> x(m), ref(m, 0.0);
  for (double& v : x) v = rng.Uniform(-1.0, 1.0);
  uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(KernelShapValues(model, x, ref, {}, ++seed));
  }
}
BENCHMARK(BM_KernelShapValues)->Arg(8)->Arg(12)->Arg(20)->Unit(benchmark::kMicrosecond);

void BM_Spearman(benchmark::State& state) {
  const size_t n = static_cast<size_t>(state.range(0));
  std::vector<std::string> a(n);
  for (size_t i = 0; i < n; ++i) a[i] = "f" + std::to_string(i);
  std::vector<std::string> b = a;
  Rng rng(3);
  rng.Shuffle(b);
  for (auto _ : state) benchmark::DoNotOptimize(Spearman(a, b));
}
BENCHMARK(BM_Spearman)->Arg(8)->Arg(64);

}  // namespace
}  // namespace xaibench

BENCHMARK_MAIN();
