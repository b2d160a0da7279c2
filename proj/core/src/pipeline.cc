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

#include "xaibench/pipeline.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "format_util.h"
#include "json_io.h"
#include "xaibench/data.h"
#include "xaibench/explainers.h"
#include "xaibench/random.h"
#include "xaibench/stability.h"
#include "xaibench/stats.h"

namespace fs = std::filesystem;

namespace xaibench {
namespace {

const std::vector<std::string_view> kMetricNames = {"accuracy", "precision", "recall",
                                                    "f1", "roc_auc"};

std::string Name(ModelKind m) { return std::string(ToString(m)); }
std::string Name(ExplainerKind e) { return std::string(ToString(e)); }

fs::path Require(const fs::path& path, std::string_view producer) {
  if (!fs::exists(path)) {
    throw Failure("missing input " + path.string() + " (written by the '" +
                  std::string(producer) + "' stage)");
  }
  return path;
}

fs::path ModelPath(const RunConfig& c, ModelKind m) {
  return ArtifactDir(c) / ("model_" + Name(m) + ".json");
}
fs::path TestPath(const RunConfig& c, double level) {
  return ArtifactDir(c) / ("test_" + LevelSlug(level) + ".csv");
}
fs::path CellPath(const RunConfig& c, std::string_view what, ModelKind m, double level) {
  return ArtifactDir(c) /
         (std::string(what) + "_" + Name(m) + "_" + LevelSlug(level) + ".json");
}

bool WithExirt(const RunConfig& c) {
  return std::find(c.explainers.begin(), c.explainers.end(), ExplainerKind::kExirt) !=
         c.explainers.end();
}

template <typename Body>
auto InStage(std::string_view stage, Body body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

// Runs body(i) for i in [0, n) on up to hardware_concurrency threads and
// rethrows the error of the lowest failing index.
template <typename Body>
void ParallelFor(size_t n, Body body) {
  const size_t workers =
      std::min<size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

RelevanceRank Explain(ExplainerKind kind, const TrainedModel& model, const Dataset& test,
                      std::span<const double> reference, const ExplainerConfig& cfg,
                      Json* exirt_artifact, std::string* response_csv) {
  switch (kind) {
    case ExplainerKind::kDalex:
      return ExplainDalexStyle(model, test, cfg);
    case ExplainerKind::kEli5:
      return ExplainEli5Style(model, test, cfg);
    case ExplainerKind::kLofo:
      return ExplainLofoStyle(model, test, cfg);
    case ExplainerKind::kShap:
      return ExplainKernelShap(model, test, reference, cfg);
    case ExplainerKind::kSkater:
      return ExplainSkaterStyle(model, test, cfg);
    case ExplainerKind::kExirt: {
      ExirtResult result = ExplainExirt(model, test, cfg);
      Json rows = Json::array();
      for (size_t r = 0; r < result.responses.num_respondents(); ++r) {
        std::string row;
        for (const uint8_t v : result.responses.respondent_row(r)) row += v ? '1' : '0';
        rows.push_back(row);
      }
      *exirt_artifact = Json{{"respondents", result.responses.respondent_ids()},
                             {"items", result.responses.item_ids()},
                             {"responses", rows},
                             {"fit", result.fit}};
      *response_csv = ResponseCsv(result.responses);
      return result.rank;
    }
  }
  throw InvalidArgument("unknown explainer");
}

std::string ConfigText(const RunConfig& c) {
  std::string text;
  for (const auto& [key, value] : ConfigEntries(c)) text += key + " = " + value + "\n";
  return text;
}

}  // namespace

StageError::StageError(std::string_view stage, std::string_view cause)
    : Failure(std::string(stage) + ": " + std::string(cause)), stage_(stage) {}

fs::path ArtifactDir(const RunConfig& config) { return config.out / "artifacts"; }

uint64_t StageSeed(uint64_t master, std::string_view stage, std::string_view model,
                   std::string_view level, std::string_view explainer) {
  uint64_t seed = MixSeed(master, stage);
  for (const std::string_view label : {model, level, explainer}) {
    if (!label.empty()) seed = MixSeed(seed, label);
  }
  return seed;
}

RunConfig WithSavedConfig(const fs::path& out, RunConfig base) {
  const fs::path saved = out / "artifacts" / "config.txt";
  if (!fs::exists(saved)) return base;
  return LoadConfigFile(saved, std::move(base));
}

void RunTrainStage(const RunConfig& c) {
  InStage("train", [&] {
    c.Validate();
    if (c.dataset.empty()) throw InvalidArgument("no dataset given (--dataset)");
    const Dataset data = LoadCsv(c.dataset);
    const SplitResult split = Split(data, c.train_fraction, StageSeed(c.seed, "split"));
    const StandardizationStats stats = ZScoreFit(split.train);
    const Dataset train = ZScoreApply(split.train, stats);
    const Dataset test = ZScoreApply(split.test, stats);

    std::error_code ec;
    fs::create_directories(ArtifactDir(c), ec);
    if (ec) throw Failure("cannot create " + ArtifactDir(c).string() + ": " + ec.message());
    WriteTextFile(ArtifactDir(c) / "config.txt", ConfigText(c));
    const DatasetSummary summary{c.dataset.string(), data.num_rows(),
                                 data.num_features(), data.CountLabel(0),
                                 data.CountLabel(1), train.num_rows(),
                                 test.num_rows(),     data.feature_names()};
    WriteJsonFile(ArtifactDir(c) / "dataset.json",
                  Json{{"summary", summary}, {"standardization", stats}});
    WriteCsv(train, ArtifactDir(c) / "train.csv");
    WriteCsv(test, ArtifactDir(c) / "test.csv");

    const CVConfig cv = c.Cv();
    ParallelFor(c.models.size(), [&](size_t i) {
      const ModelKind m = c.models[i];
      SaveModel(Train(m, train, cv, StageSeed(c.seed, "train", Name(m))), ModelPath(c, m));
    });
  });
}

void RunPerturbStage(const RunConfig& c) {
  InStage("perturb", [&] {
    const Dataset test = LoadCsv(Require(ArtifactDir(c) / "test.csv", "train"));
    for (const double level : c.levels) {
      PerturbationSpec spec;
      spec.kind = c.perturbation_kind;
      spec.fraction = level;
      spec.noise_scale = c.noise_scale;
      spec.seed = StageSeed(c.seed, "perturb", "", LevelSlug(level));
      WriteCsv(Perturb(test, spec), TestPath(c, level));
    }
  });
}

void RunExplainStage(const RunConfig& c) {
  InStage("explain", [&] {
    const Dataset train = LoadCsv(Require(ArtifactDir(c) / "train.csv", "train"));
    const std::vector<double> reference = ColumnMeans(train);
    std::vector<TrainedModel> models;
    for (const ModelKind m : c.models) models.push_back(LoadModel(Require(ModelPath(c, m), "train")));
    std::vector<Dataset> tests;
    for (const double level : c.levels) tests.push_back(LoadCsv(Require(TestPath(c, level), "perturb")));

    const size_t cells = models.size() * tests.size();
    ParallelFor(cells, [&](size_t cell) {
      const size_t mi = cell / tests.size();
      const size_t li = cell % tests.size();
      const ModelKind m = c.models[mi];
      const double level = c.levels[li];
      Json ranks = Json::array();
      Json exirt;
      std::string response_csv;
      for (const ExplainerKind e : c.explainers) {
        ExplainerConfig cfg = c.explainer;
        cfg.seed = StageSeed(c.seed, "explain", Name(m), LevelSlug(level), Name(e));
        RelevanceRank rank =
            Explain(e, models[mi], tests[li], reference, cfg, &exirt, &response_csv);
        rank.model_kind = m;
        rank.perturbation_fraction = level;
        ranks.push_back(rank);
      }
      WriteJsonFile(CellPath(c, "ranks", m, level), ranks);
      if (!exirt.is_null()) {
        WriteJsonFile(CellPath(c, "exirt", m, level), exirt);
        WriteTextFile(ArtifactDir(c) / ("responses_" + Name(m) + "_" + LevelSlug(level) +
                                        ".csv"),
                      response_csv);
      }
    });
  });
}

void RunIrtStage(const RunConfig& c) {
  InStage("irt", [&] {
    if (!WithExirt(c)) return;
    const auto grid = ThetaGrid();
    for (const ModelKind m : c.models) {
      for (const double level : c.levels) {
        const Json j = ReadJsonFile(Require(CellPath(c, "exirt", m, level), "explain"));
        const IrtFit fit = j.at("fit").get<IrtFit>();
        ReliabilityEntry entry;
        entry.model = m;
        entry.fraction = level;
        entry.summary = Summarize(fit);
        entry.items = fit.items;
        entry.item_ids = j.at("items").get<std::vector<std::string>>();
        entry.log_likelihood = fit.log_likelihood;
        entry.iterations = fit.iterations;
        entry.converged = fit.converged;
        WriteJsonFile(CellPath(c, "reliability", m, level), entry);

        const auto curves = Icc(entry.items, grid, entry.item_ids);
        const auto average = PointwiseAverage(curves);
        const auto mean_curve = MeanParameterCurve(entry.items, grid);
        std::string csv = "theta";
        for (const auto& curve : curves) csv += "," + curve.item_id;
        csv += ",average,mean_parameters\n";
        for (size_t g = 0; g < grid.size(); ++g) {
          csv += FormatShortest(grid[g]);
          for (const auto& curve : curves) csv += "," + FormatShortest(curve.p[g]);
          csv += "," + FormatShortest(average[g]) + "," +
                 FormatShortest(mean_curve[g]) + "\n";
        }
        WriteTextFile(ArtifactDir(c) / ("icc_" + Name(m) + "_" + LevelSlug(level) + ".csv"),
                      csv);
      }
    }
  });
}

void RunStabilityStage(const RunConfig& c) {
  InStage("stability", [&] {
    std::vector<double> nonzero;
    for (const double level : c.levels) {
      if (level != 0.0) nonzero.push_back(level);
    }
    std::vector<StabilityRecord> records;
    if (!nonzero.empty()) {
      for (const ExplainerKind e : c.explainers) {
        for (const ModelKind m : c.models) {
          std::optional<RelevanceRank> baseline;
          std::vector<RelevanceRank> perturbed;
          for (const double level : c.levels) {
            const Json ranks = ReadJsonFile(Require(CellPath(c, "ranks", m, level), "explain"));
            for (const Json& r : ranks) {
              auto rank = r.get<RelevanceRank>();
              if (rank.explainer != e) continue;
              if (level == 0.0) {
                baseline = std::move(rank);
              } else {
                perturbed.push_back(std::move(rank));
              }
            }
          }
          if (!baseline) {
            throw Failure("no " + Name(e) + " rank for " + Name(m) +
                          " at the original level; rerun 'explain'");
          }
          records.push_back(StabilitySum(*baseline, perturbed, nonzero));
        }
      }
    }
    Json order = Json::array();
    for (const ExplainerKind e : StabilityOrder(records)) order.push_back(ToString(e));
    WriteJsonFile(ArtifactDir(c) / "stability.json",
                  Json{{"records", records}, {"order", order}});
  });
}

void RunStatsStage(const RunConfig& c) {
  InStage("stats", [&] {
    std::vector<MetricEntry> metrics;
    for (const ModelKind m : c.models) {
      const TrainedModel model = LoadModel(Require(ModelPath(c, m), "train"));
      for (const double level : c.levels) {
        const Dataset test = LoadCsv(Require(TestPath(c, level), "perturb"));
        metrics.push_back({m, level, Evaluate(model, test)});
      }
    }
    WriteJsonFile(ArtifactDir(c) / "metrics.json", metrics);

    Json stats = {{"measurements", nullptr}, {"friedman", nullptr}, {"nemenyi", nullptr}};
    if (metrics.size() >= 2) {
      MeasurementTable table;
      table.blocks.assign(kMetricNames.begin(), kMetricNames.end());
      table.values = Matrix(kMetricNames.size(), metrics.size());
      for (size_t t = 0; t < metrics.size(); ++t) {
        const MetricEntry& e = metrics[t];
        table.treatments.push_back(TreatmentLabel(e.model, e.fraction));
        const MetricReport& r = e.metrics;
        const double values[] = {r.accuracy, r.precision, r.recall, r.f1, r.roc_auc};
        for (size_t b = 0; b < kMetricNames.size(); ++b) table.values(b, t) = values[b];
      }
      stats["measurements"] = table;
      stats["friedman"] = Friedman(table);
      stats["nemenyi"] = Nemenyi(table);
    }
    WriteJsonFile(ArtifactDir(c) / "stats.json", stats);
  });
}

RunReport RunReportStage(const RunConfig& c) {
  return InStage("report", [&] {
    RunReport r;
    r.config = ConfigEntries(c);
    r.seed = c.seed;
    r.models = c.models;
    r.explainers = c.explainers;
    r.levels = c.levels;
    r.dataset = ReadJsonFile(Require(ArtifactDir(c) / "dataset.json", "train"))
                    .at("summary")
                    .get<DatasetSummary>();
    for (const ModelKind m : c.models) {
      const TrainedModel model = LoadModel(Require(ModelPath(c, m), "train"));
      r.trained.push_back({m, Describe(model.params()), model.info().cv_auc, model.info().seed});
    }
    r.metrics = ReadJsonFile(Require(ArtifactDir(c) / "metrics.json", "stats"))
                    .get<std::vector<MetricEntry>>();
    for (const ModelKind m : c.models) {
      for (const double level : c.levels) {
        const Json ranks = ReadJsonFile(Require(CellPath(c, "ranks", m, level), "explain"));
        for (const Json& rank : ranks) r.ranks.push_back(rank.get<RelevanceRank>());
        if (WithExirt(c)) {
          r.reliability.push_back(
              ReadJsonFile(Require(CellPath(c, "reliability", m, level), "irt"))
                  .get<ReliabilityEntry>());
        }
      }
    }
    const Json stability = ReadJsonFile(Require(ArtifactDir(c) / "stability.json", "stability"));
    r.stability = stability.at("records").get<std::vector<StabilityRecord>>();
    for (const Json& e : stability.at("order")) {
      r.stability_order.push_back(ParseExplainerKind(e.get<std::string>()));
    }
    const Json stats = ReadJsonFile(Require(ArtifactDir(c) / "stats.json", "stats"));
    if (!stats.at("measurements").is_null()) {
      r.measurements = stats.at("measurements").get<MeasurementTable>();
      r.friedman = stats.at("friedman").get<FriedmanResult>();
      r.nemenyi = stats.at("nemenyi").get<PosthocMatrix>();
    }
    WriteReport(r, c.out);
    return r;
  });
}

RunReport RunAll(const RunConfig& config) {
  RunTrainStage(config);
  RunPerturbStage(config);
  RunExplainStage(config);
  RunIrtStage(config);
  RunStabilityStage(config);
  RunStatsStage(config);
  return RunReportStage(config);
}

ResponseMatrix LoadResponseCsv(const fs::path& path) {
  const std::string text = ReadTextFile(path);
  std::vector<std::string> lines;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
    start = end + 1;
  }
  auto cells = [](const std::string& line) {
    std::vector<std::string> out;
    size_t s = 0;
    while (true) {
      const size_t comma = line.find(',', s);
      out.push_back(line.substr(s, comma - s));
      if (comma == std::string::npos) break;
      s = comma + 1;
    }
    return out;
  };
  if (lines.empty()) throw InvalidArgument(path.string() + ": empty response file");
  auto header = cells(lines[0]);
  std::vector<std::string> item_ids(header.begin() + 1, header.end());
  std::vector<std::string> respondent_ids;
  std::vector<uint8_t> correct;
  for (size_t l = 1; l < lines.size(); ++l) {
    const auto row = cells(lines[l]);
    if (row.size() != header.size()) {
      throw InvalidArgument(path.string() + ":" + std::to_string(l + 1) + ": expected " +
                            std::to_string(header.size()) + " cells, found " +
                            std::to_string(row.size()));
    }
    respondent_ids.push_back(row[0]);
    for (size_t i = 1; i < row.size(); ++i) {
      if (row[i] != "0" && row[i] != "1") {
        throw InvalidArgument(path.string() + ":" + std::to_string(l + 1) + ": column '" +
                              header[i] + "' holds '" + row[i] + "', expected 0 or 1");
      }
      correct.push_back(row[i] == "1" ? 1 : 0);
    }
  }
  const size_t num_respondents = respondent_ids.size();
  const size_t num_items = item_ids.size();
  return ResponseMatrix(num_respondents, num_items, std::move(correct),
                        std::move(respondent_ids), std::move(item_ids));
}

std::string ResponseCsv(const ResponseMatrix& responses) {
  std::string out = "respondent";
  for (const auto& id : responses.item_ids()) out += "," + id;
  out += "\n";
  for (size_t r = 0; r < responses.num_respondents(); ++r) {
    out += responses.respondent_ids()[r];
    for (const uint8_t v : responses.respondent_row(r)) out += v ? ",1" : ",0";
    out += "\n";
  }
  return out;
}

}  // namespace xaibench
