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

#include "xaibench/report.h"

#include <algorithm>
#include <cmath>
#include <system_error>

#include "format_util.h"
#include "json_io.h"
#include "xaibench/error.h"

namespace xaibench {
namespace {

bool SameLevel(double x, double y) { return std::abs(x - y) <= 1e-12; }

std::string SlotName(ModelKind model, double fraction) {
  return std::string(ToString(model)) + " at " + LevelLabel(fraction);
}

template <typename T, typename Match>
void RequireOnce(const std::vector<T>& entries, Match match,
                 const std::string& what) {
  const auto n = std::count_if(entries.begin(), entries.end(), match);
  if (n == 0) throw InvalidArgument("report: missing " + what);
  if (n > 1) throw InvalidArgument("report: duplicate " + what);
}

bool Configured(std::span<const ModelKind> models, ModelKind m) {
  return std::find(models.begin(), models.end(), m) != models.end();
}
bool Configured(std::span<const ExplainerKind> explainers, ExplainerKind e) {
  return std::find(explainers.begin(), explainers.end(), e) != explainers.end();
}
bool ConfiguredLevel(std::span<const double> levels, double f) {
  return std::any_of(levels.begin(), levels.end(),
                     [&](double l) { return SameLevel(l, f); });
}

}  // namespace

std::string LevelSlug(double fraction) {
  return FormatShortest(std::round(fraction * 100.0 * 1e6) / 1e6);
}

std::string LevelLabel(double fraction) {
  if (fraction == 0.0) return "original";
  return LevelSlug(fraction) + "%";
}

std::string TreatmentLabel(ModelKind model, double fraction) {
  return std::string(ToString(model)) + ": " + LevelLabel(fraction);
}

void ValidateReport(const RunReport& r) {
  if (r.models.empty()) throw InvalidArgument("report: no models configured");
  if (r.explainers.empty()) throw InvalidArgument("report: no explainers configured");
  const bool with_exirt = Configured(r.explainers, ExplainerKind::kExirt);
  const bool with_stability =
      std::any_of(r.levels.begin(), r.levels.end(), [](double f) { return f != 0.0; });

  for (const ModelKind m : r.models) {
    RequireOnce(r.trained, [&](const ModelSummary& s) { return s.model == m; },
                "trained-model slot " + std::string(ToString(m)));
    for (const double f : r.levels) {
      auto at = [&](const auto& e) { return e.model == m && SameLevel(e.fraction, f); };
      RequireOnce(r.metrics, at, "metric slot " + SlotName(m, f));
      if (with_exirt) {
        RequireOnce(r.reliability, at, "reliability slot " + SlotName(m, f));
      }
      for (const ExplainerKind e : r.explainers) {
        RequireOnce(
            r.ranks,
            [&](const RelevanceRank& k) {
              return k.explainer == e && k.model_kind == m &&
                     SameLevel(k.perturbation_fraction, f);
            },
            "rank slot " + std::string(ToString(e)) + " / " + SlotName(m, f));
      }
    }
    if (with_stability) {
      for (const ExplainerKind e : r.explainers) {
        RequireOnce(
            r.stability,
            [&](const StabilityRecord& s) { return s.explainer == e && s.model_kind == m; },
            "stability slot " + std::string(ToString(e)) + " / " + std::string(ToString(m)));
      }
    }
  }
  // Entries outside the configured cross product.
  for (const auto& e : r.metrics) {
    if (!Configured(r.models, e.model) || !ConfiguredLevel(r.levels, e.fraction)) {
      throw InvalidArgument("report: unexpected metric slot " + SlotName(e.model, e.fraction));
    }
  }
  for (const auto& e : r.reliability) {
    if (!with_exirt || !Configured(r.models, e.model) ||
        !ConfiguredLevel(r.levels, e.fraction)) {
      throw InvalidArgument("report: unexpected reliability slot " +
                            SlotName(e.model, e.fraction));
    }
  }
  for (const auto& k : r.ranks) {
    if (!Configured(r.explainers, k.explainer) || !Configured(r.models, k.model_kind) ||
        !ConfiguredLevel(r.levels, k.perturbation_fraction)) {
      throw InvalidArgument("report: unexpected rank slot " +
                            std::string(ToString(k.explainer)) + " / " +
                            SlotName(k.model_kind, k.perturbation_fraction));
    }
  }
  for (const auto& s : r.stability) {
    if (!with_stability || !Configured(r.explainers, s.explainer) ||
        !Configured(r.models, s.model_kind)) {
      throw InvalidArgument("report: unexpected stability slot " +
                            std::string(ToString(s.explainer)) + " / " +
                            std::string(ToString(s.model_kind)));
    }
  }
  if (r.nemenyi && r.nemenyi->labels.size() != r.models.size() * r.levels.size()) {
    throw InvalidArgument("report: post-hoc matrix does not cover every treatment");
  }
}

std::string ReportJson(const RunReport& r) {
  Json config = Json::object();
  for (const auto& [key, value] : r.config) config[key] = value;
  Json models = Json::array();
  for (const ModelKind m : r.models) models.push_back(ToString(m));
  Json explainers = Json::array();
  for (const ExplainerKind e : r.explainers) explainers.push_back(ToString(e));
  Json order = Json::array();
  for (const ExplainerKind e : r.stability_order) order.push_back(ToString(e));

  Json j = {
      {"config", config},
      {"seed", r.seed},
      {"models", models},
      {"explainers", explainers},
      {"levels", r.levels},
      {"dataset", r.dataset},
      {"trained", r.trained},
      {"metrics", r.metrics},
      {"reliability", r.reliability},
      {"ranks", r.ranks},
      {"stability", r.stability},
      {"stability_order", order},
      {"measurements", r.measurements ? Json(*r.measurements) : Json()},
      {"friedman", r.friedman ? Json(*r.friedman) : Json()},
      {"nemenyi", r.nemenyi ? Json(*r.nemenyi) : Json()},
      {"counts",
       {{"ranks", r.ranks.size()},
        {"metric_reports", r.metrics.size()},
        {"reliability_summaries", r.reliability.size()},
        {"stability_records", r.stability.size()},
        {"posthoc_matrices", r.nemenyi ? 1 : 0}}},
  };
  return j.dump(2) + "\n";
}

std::string MetricsCsv(const RunReport& r) {
  std::string out = "model,perturbation,accuracy,precision,recall,f1,roc_auc\n";
  for (const MetricEntry& e : r.metrics) {
    const MetricReport& m = e.metrics;
    out += std::string(ToString(e.model)) + "," + FormatShortest(e.fraction) + "," +
           FormatShortest(m.accuracy) + "," + FormatShortest(m.precision) + "," +
           FormatShortest(m.recall) + "," + FormatShortest(m.f1) + "," +
           FormatShortest(m.roc_auc) + "\n";
  }
  return out;
}

std::string RanksCsv(std::span<const RelevanceRank> ranks) {
  std::string out = "explainer,model,perturbation,position,feature,score,stddev\n";
  for (const RelevanceRank& r : ranks) {
    for (size_t i = 0; i < r.size(); ++i) {
      out += std::string(ToString(r.explainer)) + "," + std::string(ToString(r.model_kind)) +
             "," + FormatShortest(r.perturbation_fraction) + "," + std::to_string(i + 1) +
             "," + r.ordered_features[i] + "," + FormatShortest(r.scores[i]) + "," +
             FormatShortest(r.score_stddev[i]) + "\n";
    }
  }
  return out;
}

std::string StabilityCsv(std::span<const StabilityRecord> records) {
  std::string out = "explainer,model,perturbation,rho,sum\n";
  for (const StabilityRecord& s : records) {
    for (const auto& [fraction, rho] : s.rho_by_fraction) {
      out += std::string(ToString(s.explainer)) + "," + std::string(ToString(s.model_kind)) +
             "," + FormatShortest(fraction) + "," + FormatShortest(rho) + "," +
             FormatShortest(s.sum) + "\n";
    }
  }
  return out;
}

std::string PosthocCsv(const PosthocMatrix& m) {
  std::string out = "treatment";
  for (const auto& label : m.labels) out += "," + label;
  out += "\n";
  for (size_t i = 0; i < m.labels.size(); ++i) {
    out += m.labels[i];
    for (size_t j = 0; j < m.labels.size(); ++j) out += "," + FormatShortest(m.p(i, j));
    out += "\n";
  }
  return out;
}

void WriteReport(const RunReport& r, const std::filesystem::path& directory) {
  ValidateReport(r);
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw Failure("cannot create " + directory.string() + ": " + ec.message());

  WriteTextFile(directory / "report.json", ReportJson(r));
  WriteTextFile(directory / "metrics.csv", MetricsCsv(r));
  WriteTextFile(directory / "ranks.csv", RanksCsv(r.ranks));
  WriteTextFile(directory / "stability.csv", StabilityCsv(r.stability));
  if (r.nemenyi) {
    WriteTextFile(directory / "nemenyi.csv", PosthocCsv(*r.nemenyi));
    WriteTextFile(directory / "heatmap.svg", RenderHeatmapSvg(*r.nemenyi));
  }

  const auto grid = ThetaGrid();
  for (const ReliabilityEntry& e : r.reliability) {
    const auto curves = Icc(e.items, grid, e.item_ids);
    WriteTextFile(directory / ("icc_" + std::string(ToString(e.model)) + "_" +
                               LevelSlug(e.fraction) + ".svg"),
                  RenderIccSvg(curves, e.summary, TreatmentLabel(e.model, e.fraction)));
  }

  for (const ExplainerKind e : r.explainers) {
    for (const ModelKind m : r.models) {
      std::vector<RelevanceRank> ranks;
      for (const RelevanceRank& k : r.ranks) {
        if (k.explainer == e && k.model_kind == m) ranks.push_back(k);
      }
      std::stable_sort(ranks.begin(), ranks.end(), [](const auto& x, const auto& y) {
        return x.perturbation_fraction < y.perturbation_fraction;
      });
      std::optional<StabilityRecord> record;
      for (const StabilityRecord& s : r.stability) {
        if (s.explainer == e && s.model_kind == m) record = s;
      }
      WriteTextFile(
          directory / ("bump_" + std::string(ToString(e)) + "_" +
                       std::string(ToString(m)) + ".svg"),
          RenderBumpSvg(BumpChartData(ranks), record,
                        std::string(ToString(e)) + " / " + std::string(ToString(m))));
    }
  }
}

}  // namespace xaibench
