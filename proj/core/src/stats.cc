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

#include "xaibench/stats.h"

#include <algorithm>
#include <array>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <numeric>

#include "xaibench/error.h"

namespace xaibench {
namespace {

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// P(range of `groups` iid standard normals <= w), as a Gauss-Legendre
// integral over the position of the smallest value (Copenhaver & Holland,
// 1988). `blocks` raises the result to a power for multi-block ranges.
double RangeCdf(double w, double blocks, double groups) {
  constexpr std::array<double, 6> kNodes = {
      0.981560634246719250690549090149, 0.904117256370474856678465866119,
      0.769902674194304687036893833213, 0.587317954286617447296702418941,
      0.367831498998180193752691536644, 0.125233408511468915472441369464};
  constexpr std::array<double, 6> kWeights = {
      0.047175336386511827194615961485, 0.106939325995318430960254718194,
      0.160078328543346226334652529543, 0.203167426723065921749064455810,
      0.233492536538354808760849898925, 0.249147045813402785000562436043};
  constexpr double kLogFloor = -30.0;
  constexpr double kUpper = 8.0;

  const double half = 0.5 * w;
  if (half >= kUpper) return 1.0;
  // All values within [-w/2, w/2].
  double pr = 2.0 * NormalCdf(half) - 1.0;
  pr = pr >= 1.0 ? 1.0 : std::pow(pr, groups);

  const int intervals = w > 3.0 ? 2 : 3;
  const double width = (kUpper - half) / intervals;
  const double others = groups - 1.0;
  double lower = half;
  double tail = 0.0;
  for (int k = 0; k < intervals; ++k) {
    const double mid = lower + 0.5 * width;
    const double radius = 0.5 * width;
    double sum = 0.0;
    for (int node = 0; node < 12; ++node) {
      const double x = node < 6 ? -kNodes[node] : kNodes[11 - node];
      const double weight = node < 6 ? kWeights[node] : kWeights[11 - node];
      const double u = mid + radius * x;
      if (u * u > 60.0) break;
      const double inner = NormalCdf(u) - NormalCdf(u - w);
      if (inner >= std::exp(kLogFloor / others)) {
        sum += weight * std::exp(-0.5 * u * u) * std::pow(inner, others);
      }
    }
    tail += sum * 2.0 * radius * groups / std::sqrt(2.0 * std::numbers::pi);
    lower += width;
  }
  pr += tail;
  if (pr <= std::exp(kLogFloor / blocks)) return 0.0;
  pr = std::pow(pr, blocks);
  return std::min(pr, 1.0);
}

}  // namespace

void MeasurementTable::Validate() const {
  if (blocks.size() < 2 || treatments.size() < 2) {
    throw InvalidArgument("measurement table needs >= 2 blocks and >= 2 treatments");
  }
  if (values.rows() != blocks.size() || values.cols() != treatments.size()) {
    throw InvalidArgument("measurement table: values are " +
                          std::to_string(values.rows()) + "x" +
                          std::to_string(values.cols()) + ", labels say " +
                          std::to_string(blocks.size()) + "x" +
                          std::to_string(treatments.size()));
  }
  for (const double v : values.data()) {
    if (!std::isfinite(v)) throw InvalidArgument("measurement table: non-finite value");
  }
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

double ChiSquareSurvival(double x, double df) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

FriedmanResult Friedman(const MeasurementTable& table) {
  table.Validate();
  const size_t n = table.blocks.size();
  const size_t k = table.treatments.size();
  std::vector<double> rank_sums(k, 0.0);
  for (size_t b = 0; b < n; ++b) {
    const auto ranks = AverageRanks(table.values.row(b));
    for (size_t t = 0; t < k; ++t) rank_sums[t] += ranks[t];
  }
  double squares = 0.0;
  for (const double r : rank_sums) squares += r * r;
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  double statistic = 12.0 * squares / (dn * dk * (dk + 1.0)) - 3.0 * dn * (dk + 1.0);
  // Rounding can leave a tiny residue (of either sign) when nothing differs.
  if (std::abs(statistic) < 1e-9 * dn * dk) statistic = 0.0;

  FriedmanResult result;
  result.statistic = statistic;
  result.p_value = ChiSquareSurvival(statistic, dk - 1.0);
  for (const double r : rank_sums) result.mean_ranks.push_back(r / dn);
  return result;
}

PosthocMatrix Nemenyi(const MeasurementTable& table) {
  const FriedmanResult friedman = Friedman(table);
  const size_t k = table.treatments.size();
  const double dn = static_cast<double>(table.blocks.size());
  const double dk = static_cast<double>(k);
  const double scale = std::sqrt(dk * (dk + 1.0) / (6.0 * dn));

  PosthocMatrix out{table.treatments, Matrix(k, k, 1.0)};
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = i + 1; j < k; ++j) {
      const double q =
          std::abs(friedman.mean_ranks[i] - friedman.mean_ranks[j]) / scale;
      const double p =
          std::clamp(1.0 - StudentizedRangeCdf(q * std::numbers::sqrt2, dk), 0.0, 1.0);
      out.p(i, j) = p;
      out.p(j, i) = p;
    }
  }
  return out;
}

double StudentizedRangeCdf(double q, double groups, double df) {
  if (!(groups >= 2.0) || !(df >= 2.0)) {
    throw InvalidArgument("studentized range needs groups >= 2 and df >= 2");
  }
  if (q <= 0.0) return 0.0;
  if (df > 25000.0) return RangeCdf(q, 1.0, groups);

  // Integrate the infinite-df result over the chi distribution of the
  // variance estimate with 16-point Gauss-Legendre panels.
  constexpr std::array<double, 8> kNodes = {
      0.989400934991649932596154173450, 0.944575023073232576077988415535,
      0.865631202387831743880467897712, 0.755404408355003033895101194847,
      0.617876244402643748446671764049, 0.458016777657227386342419442984,
      0.281603550779258913230460501460, 0.950125098376374401853193354250e-1};
  constexpr std::array<double, 8> kWeights = {
      0.271524594117540948517805724560e-1, 0.622535239386478928628438369944e-1,
      0.951585116824927848099251076022e-1, 0.124628971255533872052476282192,
      0.149595988816576732081501730547, 0.169156519395002538189312079030,
      0.182603415044923588866763667969, 0.189450610455068496285396723208};
  const double f2 = 0.5 * df;
  const double panel = df <= 100.0 ? 1.0 : df <= 800.0 ? 0.5 : df <= 5000.0 ? 0.25 : 0.125;
  const double log_norm = f2 * std::log(df) - df * std::numbers::ln2 -
                          std::lgamma(f2) + std::log(panel);
  double total = 0.0;
  for (int i = 1; i <= 50; ++i) {
    double panel_sum = 0.0;
    const double center = (2.0 * i - 1.0) * panel;
    for (int node = 0; node < 16; ++node) {
      const double offset =
          (node < 8 ? -kNodes[node] : kNodes[node - 8]) * panel;
      const double weight = kWeights[node < 8 ? node : node - 8];
      const double u = center + offset;
      const double log_density = log_norm + (f2 - 1.0) * std::log(u) - u * df * 0.25;
      if (log_density >= -30.0) {
        panel_sum += RangeCdf(q * std::sqrt(0.5 * u), 1.0, groups) * weight *
                     std::exp(log_density);
      }
    }
    if (i * panel >= 1.0 && panel_sum <= 1e-14) break;
    total += panel_sum;
  }
  return std::min(total, 1.0);
}

}  // namespace xaibench
