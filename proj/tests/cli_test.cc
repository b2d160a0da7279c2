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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.h"
#include "pipeline_fixture.h"
#include "test_support.h"

namespace xaibench {
namespace {

using ::xaibench::testing::ScratchDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(CliTest, VersionAndHelpSucceed) {
  const Result v = Invoke({"--version"});
  EXPECT_EQ(v.code, kExitOk);
  EXPECT_NE(v.out.find("xaibench "), std::string::npos);
  const Result h = Invoke({"--help"});
  EXPECT_EQ(h.code, kExitOk);
  for (const char* cmd : {"run", "train", "perturb", "explain", "irt", "stability",
                          "stats", "report"}) {
    EXPECT_NE(h.out.find(cmd), std::string::npos) << cmd;
  }
  const Result sub = Invoke({"explain", "--help"});
  EXPECT_EQ(sub.code, kExitOk);
  for (const char* flag : {"--dataset", "--config", "--seed", "--out", "--models",
                           "--explainers", "--levels", "--perturbation-kind"}) {
    EXPECT_NE(sub.out.find(flag), std::string::npos) << flag;
  }
}

TEST(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Invoke({}).code, kExitUsage);
  EXPECT_EQ(Invoke({"frobnicate"}).code, kExitUsage);
  const Result unknown = Invoke({"run", "--bogus"});
  EXPECT_EQ(unknown.code, kExitUsage);
  EXPECT_NE(unknown.err.find("--bogus"), std::string::npos);
  EXPECT_EQ(Invoke({"run", "--models", "svm"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"run", "--levels", "4%,10%"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"run", "--seed", "abc"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"run", "--config", "/nonexistent/x.conf"}).code, kExitUsage);
}

TEST(CliTest, StageWithoutArtifactsExitsOne) {
  ScratchDir dir("cli_missing");
  const Result r = Invoke({"explain", "--out", (dir.path() / "none").string()});
  EXPECT_EQ(r.code, kExitStageFailure);
  EXPECT_NE(r.err.find("explain"), std::string::npos);
  const Result d = Invoke({"train", "--dataset", (dir.path() / "absent.csv").string(),
                        "--out", (dir.path() / "o").string()});
  EXPECT_EQ(d.code, kExitStageFailure);
}

TEST(CliTest, StagesByHandThenReport) {
  ScratchDir dir("cli_stages");
  const RunConfig c = testing::SmallRunConfig(dir.path());
  std::string text;
  for (const auto& [key, value] : ConfigEntries(c)) text += key + " = " + value + "\n";
  const auto conf = dir.path() / "small.conf";
  {
    std::ofstream out(conf);
    out << text;
  }
  const std::string out_dir = (dir.path() / "o").string();
  ASSERT_EQ(Invoke({"train", "--config", conf.string(), "--out", out_dir,
                 "--explainers", "eli5,exirt"}).code,
            kExitOk);
  // Later stages pick the configuration up from the artifacts.
  for (const char* stage : {"perturb", "explain", "irt", "stability", "stats"}) {
    ASSERT_EQ(Invoke({stage, "--out", out_dir}).code, kExitOk) << stage;
  }
  const Result report = Invoke({"report", "--out", out_dir});
  ASSERT_EQ(report.code, kExitOk) << report.err;
  EXPECT_NE(report.out.find("wrote 8 ranks, 4 metric reports, 4 reliability "
                            "summaries, 4 stability records, 1 post-hoc matrix"),
            std::string::npos)
      << report.out;
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "o" / "report.json"));
}

TEST(CliTest, IrtFitsResponseCsv) {
  ScratchDir dir("cli_irt");
  const auto path = dir.path() / "u.csv";
  {
    std::ofstream out(path);
    out << "respondent,a,b,c\nm1,1,1,0\nm2,1,0,0\nm3,1,1,1\n";
  }
  const Result r = Invoke({"irt", "--responses", path.string(), "--out",
                        (dir.path() / "o").string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("respondents 3, items 3"), std::string::npos);
  EXPECT_NE(r.out.find("m3,"), std::string::npos);
  const Result bad = Invoke({"irt", "--responses", (dir.path() / "x.csv").string(),
                          "--out", (dir.path() / "o").string()});
  EXPECT_EQ(bad.code, kExitStageFailure);
}

}  // namespace
}  // namespace xaibench
