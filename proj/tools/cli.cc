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

#include "cli.h"

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "xaibench/config.h"
#include "xaibench/error.h"
#include "xaibench/irt.h"
#include "xaibench/pipeline.h"

namespace xaibench {
namespace {

// Flag values as given; applied through the config parser so the file and
// the command line share one validation path.
struct Flags {
  std::string config_file;
  std::map<std::string, std::string> values;  // config key -> raw value
  std::string responses;                      // irt only
};

struct Subcommand {
  std::string_view name;
  std::string_view help;
};

constexpr Subcommand kSubcommands[] = {
    {"run", "Run every stage and write the report"},
    {"train", "Load, standardize and split the dataset; tune and fit the models"},
    {"perturb", "Write the perturbed test variants"},
    {"explain", "Rank features with every explainer (exirt also fits IRT)"},
    {"irt", "Summarize exirt fits and export ICCs, or fit --responses CSV"},
    {"stability", "Spearman stability of the ranks across levels"},
    {"stats", "Evaluate metrics and run Friedman / Nemenyi"},
    {"report", "Assemble report.json, CSV tables and SVG charts"},
};

void AddCommonFlags(CLI::App& cmd, Flags& flags) {
  cmd.add_option("--config", flags.config_file, "key = value configuration file");
  const std::pair<std::string_view, std::string_view> value_flags[] = {
      {"dataset", "Input CSV (header row, class column last)"},
      {"seed", "Master seed (default 7)"},
      {"out", "Output directory"},
      {"models", "Comma list of gbt, mlp, cart, knn"},
      {"explainers", "Comma list of dalex, eli5, exirt, lofo, shap, skater"},
      {"levels", "Perturbation levels, e.g. 0,4%,6%,10% or 0,0.04"},
      {"perturbation-kind", "permutation or noise"},
  };
  for (const auto& [key, help] : value_flags) {
    const std::string k(key);
    cmd.add_option_function<std::string>(
        "--" + k, [&flags, k](const std::string& v) { flags.values[k] = v; },
        std::string(help));
  }
}

RunConfig ResolveConfig(std::string_view command, const Flags& flags) {
  RunConfig from_file;
  if (!flags.config_file.empty()) from_file = LoadConfigFile(flags.config_file);
  std::filesystem::path out = from_file.out;
  if (const auto it = flags.values.find("out"); it != flags.values.end()) out = it->second;

  RunConfig config;
  if (command != "run" && command != "train") config = WithSavedConfig(out, config);
  if (!flags.config_file.empty()) config = LoadConfigFile(flags.config_file, config);
  for (const auto& [key, value] : flags.values) ApplyConfigValue(config, key, value);
  config.out = out;
  config.Validate();
  return config;
}

void PrintReportSummary(const RunReport& r, std::ostream& out) {
  out << "wrote " << r.ranks.size() << " ranks, " << r.metrics.size()
      << " metric reports, " << r.reliability.size() << " reliability summaries, "
      << r.stability.size() << " stability records, " << (r.nemenyi ? 1 : 0)
      << " post-hoc matrix\n";
  for (const MetricEntry& e : r.metrics) {
    out << "  " << TreatmentLabel(e.model, e.fraction) << "  accuracy "
        << e.metrics.accuracy << "  roc_auc " << e.metrics.roc_auc << "\n";
  }
  if (!r.stability_order.empty()) {
    out << "stability order:";
    for (const ExplainerKind e : r.stability_order) out << " " << ToString(e);
    out << "\n";
  }
}

int Execute(std::string_view command, const RunConfig& config, const Flags& flags,
            std::ostream& out) {
  if (command == "run") {
    PrintReportSummary(RunAll(config), out);
  } else if (command == "train") {
    RunTrainStage(config);
  } else if (command == "perturb") {
    RunPerturbStage(config);
  } else if (command == "explain") {
    RunExplainStage(config);
  } else if (command == "irt") {
    if (flags.responses.empty()) {
      RunIrtStage(config);
    } else {
      ResponseMatrix responses = [&] {
        try {
          return LoadResponseCsv(flags.responses);
        } catch (const std::exception& e) {
          throw StageError("irt", e.what());
        }
      }();
      const IrtFit fit = Fit3pl(responses, config.explainer.irt);
      const ReliabilitySummary s = Summarize(fit);
      out << "respondents " << responses.num_respondents() << ", items "
          << responses.num_items() << ", iterations " << fit.iterations
          << (fit.converged ? " (converged)" : " (not converged)") << "\n"
          << "mean difficulty " << s.mean_difficulty << ", discrimination "
          << s.mean_discrimination << ", guessing " << s.mean_guessing
          << ", negative items " << s.negative_item_count << "\n";
      out << "respondent,theta\n";
      for (size_t r = 0; r < responses.num_respondents(); ++r) {
        out << responses.respondent_ids()[r] << "," << fit.abilities.theta[r] << "\n";
      }
    }
  } else if (command == "stability") {
    RunStabilityStage(config);
  } else if (command == "stats") {
    RunStatsStage(config);
  } else if (command == "report") {
    PrintReportSummary(RunReportStage(config), out);
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Reliability and explanation-stability benchmark for tabular classifiers",
               "xaibench");
  app.set_version_flag("--version", std::string("xaibench ") + XAIBENCH_VERSION);
  app.require_subcommand(1);

  Flags flags;
  std::map<std::string, CLI::App*> commands;
  for (const Subcommand& s : kSubcommands) {
    CLI::App* cmd = app.add_subcommand(std::string(s.name), std::string(s.help));
    AddCommonFlags(*cmd, flags);
    if (s.name == "irt") {
      cmd->add_option("--responses", flags.responses,
                      "Response-matrix CSV to fit instead of the exirt artifacts");
    }
    commands[std::string(s.name)] = cmd;
  }

  std::vector<std::string> argv_storage = {"xaibench"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failed = &app;
    for (const auto& [name, cmd] : commands) {
      if (cmd->parsed()) failed = cmd;
    }
    err << failed->help();
    return kExitUsage;
  }

  std::string command;
  for (const auto& [name, cmd] : commands) {
    if (cmd->parsed()) command = name;
  }

  RunConfig config;
  try {
    config = ResolveConfig(command, flags);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    return Execute(command, config, flags, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitStageFailure;
  }
}

}  // namespace xaibench
