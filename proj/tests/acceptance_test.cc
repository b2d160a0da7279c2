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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when a criterion fails that is not listed in --known-divergence.
//
//   acceptance_test --dataset=data/pima.csv --work=DIR [--known-divergence=7,..]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.h"
#include "test_support.h"
#include "xaibench/config.h"
#include "xaibench/explainers.h"
#include "xaibench/irt.h"
#include "xaibench/pipeline.h"
#include "xaibench/report.h"
#include "xaibench/stability.h"
#include "xaibench/stats.h"

namespace xaibench {
namespace {

namespace fs = std::filesystem;
using namespace ::xaibench::testing;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed sub-check; returns `ok` for chaining.
  bool Expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
    return ok;
  }
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

void PCorrectValues(Outcome& o) {
  const double p = PCorrect(1.54, -2.18, 0.14, 0.0);
  o.detail << "p = " << p;
  o.Expect(std::abs(p - 0.9711) <= 1e-3, "p_correct(1.54, -2.18, 0.14, 0)");
  for (double c : {0.0, 0.14, 0.3}) {
    o.Expect(PCorrect(1.54, -2.18, c, -2.18) == c + (1 - c) / 2, "midpoint exact");
  }
}

void IrtRecovery(Outcome& o) {
  const auto start = Clock::now();
  const SimulatedIrt sim = SimulateIrt(200, 100, 2024);
  const IrtFit fit = Fit3pl(sim.responses);
  const double corr = Correlation(fit.abilities.theta, sim.theta);
  double abs_b = 0.0;
  size_t sign_ok = 0;
  for (size_t i = 0; i < 100; ++i) {
    abs_b += std::abs(fit.items.b[i] - sim.items.b[i]) / 100;
    sign_ok += (fit.items.a[i] > 0) == (sim.items.a[i] > 0);
  }
  bool monotone = true;
  for (size_t k = 1; k < fit.trace.size(); ++k) {
    monotone = monotone && fit.trace[k] >= fit.trace[k - 1];
  }
  const double secs = Seconds(start);
  o.detail << "corr " << corr << ", mean |db| " << abs_b << ", sign " << sign_ok
           << "%, " << fit.iterations << " iterations, " << secs << " s";
  o.Expect(corr >= 0.85, "corr >= 0.85");
  o.Expect(abs_b <= 0.5, "mean |db| <= 0.5");
  o.Expect(sign_ok >= 80, "sign >= 80%");
  o.Expect(monotone, "log-likelihood non-decreasing");
  o.Expect(secs < 60, "runtime < 60 s");
}

void ShapleyCorrectness(Outcome& o) {
  const auto start = Clock::now();
  Rng rng(11);
  double brute_err = 0.0;
  for (size_t m = 1; m <= 8; ++m) {
    const auto model = Interacting(m);
    for (int t = 0; t < 3; ++t) {
      const auto x = RandomPoint(rng, m), ref = RandomPoint(rng, m);
      const auto phi = KernelShapValues(model, x, ref, {}, t);
      const auto truth = BruteForceShapley(model, x, ref);
      for (size_t j = 0; j < m; ++j) {
        brute_err = std::max(brute_err, std::abs(phi[j] - truth[j]));
      }
    }
  }
  double efficiency_err = 0.0;
  {
    const auto model = Interacting(8);
    const auto ref = RandomPoint(rng, 8);
    for (int t = 0; t < 50; ++t) {
      const auto x = RandomPoint(rng, 8);
      const auto phi = KernelShapValues(model, x, ref, {}, t);
      const auto f = model.PredictProba(Matrix::FromRows({x, ref}));
      efficiency_err = std::max(
          efficiency_err,
          std::abs(std::accumulate(phi.begin(), phi.end(), 0.0) - (f[0] - f[1])));
    }
  }
  double sampled_err = 0.0;
  {
    const size_t m = 13;
    const auto model = Interacting(m);
    ExplainerConfig sampled;
    sampled.coalition_budget = 2048;
    ExplainerConfig exact;
    exact.exact_max_features = m;
    for (int t = 0; t < 5; ++t) {
      const auto x = RandomPoint(rng, m), ref = RandomPoint(rng, m);
      const auto approx = KernelShapValues(model, x, ref, sampled, 100 + t);
      const auto truth = KernelShapValues(model, x, ref, exact, 0);
      for (size_t j = 0; j < m; ++j) {
        sampled_err = std::max(sampled_err, std::abs(approx[j] - truth[j]));
      }
    }
  }
  const double secs = Seconds(start);
  o.detail << "max |exact - brute| " << brute_err << ", max efficiency gap "
           << efficiency_err << ", max |sampled - exact| " << sampled_err << ", "
           << secs << " s";
  o.Expect(brute_err <= 1e-6, "exact vs brute force within 1e-6");
  o.Expect(efficiency_err <= 1e-6, "efficiency within 1e-6");
  o.Expect(sampled_err <= 0.05, "sampled within 0.05");
  o.Expect(secs < 60, "runtime < 60 s");
}

void SpearmanOracle(Outcome& o) {
  size_t pairs = 0;
  for (size_t n = 1; n <= 5; ++n) {
    std::vector<std::string> p;
    for (size_t i = 0; i < n; ++i) p.push_back(std::string(1, char('a' + i)));
    std::vector<std::vector<std::string>> perms;
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    for (const auto& a : perms) {
      for (const auto& b : perms) {
        ++pairs;
        // Integer form of the definition, exact in floating point.
        long d2 = 0;
        for (size_t i = 0; i < n; ++i) {
          const long j = std::find(b.begin(), b.end(), a[i]) - b.begin();
          d2 += (long(i) - j) * (long(i) - j);
        }
        const double direct =
            n == 1 ? 1.0 : 1.0 - 6.0 * d2 / double(n * (n * n - 1));
        o.Expect(Spearman(a, b) == direct, "definition, n=" + std::to_string(n));
        if (n > 1) {
          o.Expect(std::abs(Spearman(a, b) - PearsonOfPositions(a, b)) < 1e-12,
                   "pearson of positions, n=" + std::to_string(n));
        }
      }
    }
  }
  std::vector<std::string> a = {"a", "b", "c", "d", "e", "f", "g", "h"};
  auto b = a;
  std::swap(b[2], b[3]);
  const double swap = Spearman(a, b);
  o.detail << pairs << " permutation pairs, adjacent swap n=8 rho "
           << std::setprecision(12) << swap;
  // 1 - 6 * 2 / (8 * 63) = 0.976190476...
  o.Expect(std::abs(swap - 0.976190476190476) <= 1e-9, "adjacent swap = 0.976190");
}

MeasurementTable Table(const std::vector<std::vector<double>>& rows) {
  MeasurementTable t;
  t.values = Matrix::FromRows(rows);
  for (size_t b = 0; b < rows.size(); ++b) t.blocks.push_back("b" + std::to_string(b));
  for (size_t k = 0; k < rows[0].size(); ++k) t.treatments.push_back("t" + std::to_string(k));
  return t;
}

bool ValidPosthoc(const PosthocMatrix& m) {
  for (size_t i = 0; i < m.labels.size(); ++i) {
    if (m.p(i, i) != 1.0) return false;
    for (size_t j = 0; j < m.labels.size(); ++j) {
      if (m.p(i, j) != m.p(j, i)) return false;
    }
  }
  return true;
}

void FriedmanNemenyi(Outcome& o) {
  const MeasurementTable same = Table({{1, 1, 1}, {2, 2, 2}, {3, 3, 3}, {4, 4, 4}});
  const FriedmanResult fs = Friedman(same);
  const PosthocMatrix ns = Nemenyi(same);
  o.Expect(std::abs(fs.statistic) <= 1e-9, "identical columns statistic 0");
  for (size_t i = 0; i < 3; ++i) {
    for (size_t j = 0; j < 3; ++j) o.Expect(std::abs(ns.p(i, j) - 1) <= 1e-9, "p = 1");
  }
  const FriedmanResult ordered = Friedman(Table({{1, 2, 3}, {10, 20, 30}, {-3, -2, -1}}));
  o.detail << "identical-column statistic " << fs.statistic
           << ", ordered 3x3 statistic " << ordered.statistic;
  o.Expect(ordered.statistic == 6.0, "3x3 statistic = 6.0 exactly");
  Rng rng(5);
  size_t checked = 0;
  for (int t = 0; t < 50; ++t) {
    const size_t n = 2 + rng.Index(10), k = 2 + rng.Index(12);
    std::vector<std::vector<double>> rows(n, std::vector<double>(k));
    for (auto& row : rows) {
      for (double& v : row) v = std::round(rng.Uniform() * 5);
    }
    checked += ValidPosthoc(Nemenyi(Table(rows)));
  }
  o.Expect(ValidPosthoc(ns) && checked == 50, "symmetric, unit diagonal");
  o.detail << ", " << checked << "/50 random post-hoc matrices valid";
}

struct PimaRuns {
  fs::path dataset;
  fs::path work;
  std::optional<RunReport> first;
  double first_seconds = 0.0;
  std::optional<fs::path> first_out, second_out;

  RunConfig Config(const std::string& name) const {
    RunConfig c;
    c.dataset = dataset;
    c.out = work / name;
    return c;
  }
  const RunReport& First() {
    if (!first) {
      fs::remove_all(work / "run1");
      const auto start = Clock::now();
      first = RunAll(Config("run1"));
      first_seconds = Seconds(start);
      first_out = work / "run1";
    }
    return *first;
  }
  const fs::path& Second() {
    if (!second_out) {
      fs::remove_all(work / "run2");
      RunAll(Config("run2"));
      second_out = work / "run2";
    }
    return *second_out;
  }
};

const MetricReport& MetricsAt(const RunReport& r, ModelKind m, double f) {
  for (const auto& e : r.metrics) {
    if (e.model == m && e.fraction == f) return e.metrics;
  }
  throw Failure("no metrics for " + TreatmentLabel(m, f));
}

const ReliabilitySummary& ReliabilityAt(const RunReport& r, ModelKind m, double f) {
  for (const auto& e : r.reliability) {
    if (e.model == m && e.fraction == f) return e.summary;
  }
  throw Failure("no reliability for " + TreatmentLabel(m, f));
}

void PipelineTrend(Outcome& o, PimaRuns& runs) {
  const RunReport& r = runs.First();
  for (const ModelKind m : kAllModelKinds) {
    const double a0 = MetricsAt(r, m, 0.0).roc_auc;
    const double a10 = MetricsAt(r, m, 0.1).roc_auc;
    o.detail << ToString(m) << " auc " << a0 << " -> " << a10 << "; ";
    o.Expect(a10 <= a0 + 0.02, std::string(ToString(m)) + " auc(10%) <= auc(0%) + 0.02");
  }
  const MetricReport& g = MetricsAt(r, ModelKind::kGbt, 0.0);
  o.detail << "gbt accuracy " << g.accuracy << ", run " << runs.first_seconds << " s";
  o.Expect(g.accuracy >= 0.70 && g.accuracy <= 0.82, "gbt accuracy in [0.70, 0.82]");
  o.Expect(g.roc_auc >= 0.62 && g.roc_auc <= 0.80, "gbt roc_auc in [0.62, 0.80]");
  o.Expect(runs.first_seconds < 600, "runtime < 10 min");
}

void ReliabilityDirection(Outcome& o, PimaRuns& runs) {
  const RunReport& r = runs.First();
  const ReliabilitySummary& s0 = ReliabilityAt(r, ModelKind::kGbt, 0.0);
  const ReliabilitySummary& s10 = ReliabilityAt(r, ModelKind::kGbt, 0.1);
  o.detail << "gbt difficulty " << s0.mean_difficulty << " -> " << s10.mean_difficulty
           << ", guessing " << s0.mean_guessing << " -> " << s10.mean_guessing;
  o.Expect(s0.mean_difficulty <= s10.mean_difficulty, "difficulty(0%) <= difficulty(10%)");
  o.Expect(s0.mean_guessing <= s10.mean_guessing, "guessing(0%) <= guessing(10%)");
  ReliabilitySummary gbt, mlp;
  gbt.mean_discrimination = 1.54, gbt.mean_difficulty = -2.18, gbt.mean_guessing = 0.14;
  mlp.mean_discrimination = 1.75, mlp.mean_difficulty = -1.77, mlp.mean_guessing = 0.18;
  const ReliabilityVerdict v = CompareReliability(gbt, mlp);
  o.detail << ", reference triples verdict " << ToString(v);
  o.Expect(v == ReliabilityVerdict::kFirstMoreReliable, "reference triples favour gbt");
}

void NullFeature(Outcome& o) {
  const Dataset train = AndDataset(400, 3, 81);
  const Dataset test = AndDataset(200, 3, 82);
  const TrainedModel cart = Fit(CartParams{0, 1}, train, 3);
  o.Expect(!std::get<CartState>(cart.state()).tree.UsesFeature(2),
           "cart never splits on the noise feature");
  ExplainerConfig config;
  config.seed = 83;
  const std::pair<RelevanceRank, double> ranks[] = {
      {ExplainDalexStyle(cart, test, config), 0.0},
      {ExplainEli5Style(cart, test, config), 0.0},
      {ExplainLofoStyle(cart, test, config), 0.02},
      {ExplainKernelShap(cart, test, ColumnMeans(train), config), 0.0},
      {ExplainSkaterStyle(cart, test, config), 0.0},
      {ExplainExirt(cart, test, config).rank, 0.0}};
  for (const auto& [rank, tolerance] : ranks) {
    const std::string name(ToString(rank.explainer));
    o.detail << name << " " << rank.ordered_features.back() << "=" << rank.scores.back()
             << "; ";
    o.Expect(rank.ordered_features.back() == "x2", name + " ranks noise last");
    o.Expect(std::abs(rank.scores.back()) <= tolerance, name + " noise score 0");
  }
}

void Determinism(Outcome& o, PimaRuns& runs) {
  runs.First();
  const fs::path& a = *runs.first_out;
  const fs::path& b = runs.Second();
  size_t compared = 0;
  std::set<std::string> names;
  for (const auto& dir : {a, b}) {
    for (const auto& e : fs::directory_iterator(dir)) {
      const std::string name = e.path().filename().string();
      if (name == "report.json" || e.path().extension() == ".svg") names.insert(name);
    }
  }
  for (const std::string& name : names) {
    ++compared;
    o.Expect(fs::exists(a / name) && fs::exists(b / name) &&
                 ReadFile(a / name) == ReadFile(b / name),
             name + " identical");
  }
  o.detail << compared << " files compared (report.json and SVGs)";
  o.Expect(names.count("report.json") == 1 && compared > 1, "files present");
}

void ArtifactCounts(Outcome& o, PimaRuns& runs) {
  const RunReport& r = runs.First();
  o.detail << r.ranks.size() << " ranks, " << r.metrics.size() << " metric reports, "
           << r.reliability.size() << " reliability summaries, " << r.stability.size()
           << " stability records, " << (r.nemenyi ? 1 : 0) << " post-hoc matrix";
  o.Expect(r.ranks.size() == 96, "96 ranks");
  o.Expect(r.metrics.size() == 16, "16 metric reports");
  o.Expect(r.reliability.size() == 16, "16 reliability summaries");
  o.Expect(r.stability.size() == 24, "24 stability records");
  o.Expect(r.nemenyi.has_value(), "1 post-hoc matrix");
}

std::string FlagValue(int argc, char** argv, const std::string& name) {
  const std::string prefix = "--" + name + "=";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind(prefix, 0) == 0) return arg.substr(prefix.size());
  }
  return "";
}

int Main(int argc, char** argv) {
  PimaRuns runs;
  runs.dataset = FlagValue(argc, argv, "dataset");
  runs.work = FlagValue(argc, argv, "work");
  if (runs.dataset.empty() || runs.work.empty()) {
    std::cerr << "usage: acceptance_test --dataset=CSV --work=DIR "
                 "[--known-divergence=N,...]\n";
    return 2;
  }
  std::set<int> known;
  std::istringstream list(FlagValue(argc, argv, "known-divergence"));
  for (std::string item; std::getline(list, item, ',');) {
    if (!item.empty()) known.insert(std::stoi(item));
  }
  fs::create_directories(runs.work);

  const std::pair<std::string, std::function<void(Outcome&)>> criteria[] = {
      {"3PL evaluation", PCorrectValues},
      {"IRT recovery", IrtRecovery},
      {"Shapley correctness", ShapleyCorrectness},
      {"Spearman oracle", SpearmanOracle},
      {"Friedman/Nemenyi", FriedmanNemenyi},
      {"pipeline trend", [&](Outcome& o) { PipelineTrend(o, runs); }},
      {"exirt reliability direction", [&](Outcome& o) { ReliabilityDirection(o, runs); }},
      {"null-feature soundness", NullFeature},
      {"determinism", [&](Outcome& o) { Determinism(o, runs); }},
      {"artifact counts", [&](Outcome& o) { ArtifactCounts(o, runs); }},
  };
  int unexpected = 0;
  for (size_t i = 0; i < std::size(criteria); ++i) {
    const int id = static_cast<int>(i + 1);
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.Expect(false, std::string("exception: ") + e.what());
    }
    const bool excused = !o.pass && known.count(id) > 0;
    if (!o.pass && !excused) ++unexpected;
    std::cout << (o.pass ? "PASS " : "FAIL ") << id << " " << criteria[i].first << ": "
              << o.detail.str() << (excused ? " (known divergence)" : "") << std::endl;
  }
  return unexpected == 0 ? 0 : 1;
}

}  // namespace
}  // namespace xaibench

int main(int argc, char** argv) { return xaibench::Main(argc, argv); }
