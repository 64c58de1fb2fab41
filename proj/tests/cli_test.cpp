// Copyright 2026 The Harmonkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>

#include "harmonkit/json_codec.hpp"
#include "harmonkit/spec.hpp"
#include "support.hpp"

namespace harmonkit {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("harmonkit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliResult run(const std::string& args) {
    const fs::path err = dir_ / "stderr.txt";
    const std::string command = std::string(HARMONKIT_CLI) + " " + args + " 2>" + err.string();
    CliResult r;
    FILE* pipe = popen(command.c_str(), "r");
    char buffer[4096];
    std::size_t n;
    while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) r.out.append(buffer, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = testing::slurp(err);
    return r;
  }

  std::string fixture(const char* name) const { return (testing::data_dir() / "fixtures" / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, MatchSchemaJson) {
  const CliResult r = run("match-schema --source " + fixture("endometrial.csv") +
                    " --target model:gdc-subset --matcher ensemble --format json");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const Json j = Json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  bool found = false;
  for (const Json& e : j) {
    found = found || (e["source_attribute"] == "Gender" && e["target_attribute"] == "Sex");
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(Json(match_schema(testing::endometrial(), MatchTarget(testing::gdc()), matchers::kEnsemble)), j);
}

TEST_F(CliTest, DeterministicOutput) {
  const std::string args = "match-schema --source " + fixture("pancreatic.csv") + " --target model:gdc-subset";
  EXPECT_EQ(run(args).out, run(args).out);
  const std::string split = "split --source " + fixture("endometrial.csv") + " --fraction 0.3 --seed 42";
  ASSERT_EQ(run(split + " --base-out " + (dir_ / "b1.csv").string() + " --holdout-out " + (dir_ / "h1.csv").string())
                .exit_code,
            0);
  run(split + " --base-out " + (dir_ / "b2.csv").string() + " --holdout-out " + (dir_ / "h2.csv").string());
  EXPECT_EQ(testing::slurp(dir_ / "h1.csv"), testing::slurp(dir_ / "h2.csv"));
  EXPECT_EQ(read_csv(dir_ / "h1.csv"), split_dataset(testing::endometrial(), 0.3, 42).second);
}

TEST_F(CliTest, RankRowsAreSorted) {
  const CliResult r = run("rank --source " + fixture("endometrial.csv") +
                    " --target model:gdc-subset --attribute FIGO_stage --k 3 --format json");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const Json j = Json::parse(r.out);
  ASSERT_EQ(j.size(), 3u);
  EXPECT_GE(j[0]["score"].get<double>(), j[1]["score"].get<double>());
  EXPECT_GE(j[1]["score"].get<double>(), j[2]["score"].get<double>());
  const CliResult table = run("rank --source " + fixture("endometrial.csv") +
                        " --target model:gdc-subset --attribute FIGO_stage --k 3");
  EXPECT_NE(table.out.find(j[0]["target_attribute"].get<std::string>()), std::string::npos);
}

TEST_F(CliTest, ApplyEqualsMaterialize) {
  const fs::path holdout = dir_ / "holdout.csv", out = dir_ / "out.csv";
  const Dataset held = split_dataset(testing::endometrial(), 0.3, 42).second;
  write_csv(held, holdout);
  const fs::path spec = testing::golden_dir() / "endometrial_legacy.harmon.json";
  const CliResult r = run("apply --spec " + spec.string() + " --source " + holdout.string() + " -o " + out.string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(testing::slurp(out), format_csv(materialize(parse_spec(testing::slurp(spec)), held)));
}

TEST_F(CliTest, ValueEditsAndSpec) {
  const std::string common = "--source " + fixture("endometrial.csv") + " --target model:gdc-subset";
  const CliResult values = run("match-values " + common +
                         " --attribute FIGO_stage --target-attribute Pathologic_staging_primary_tumor_pt"
                         " --method token_jaccard --set 'IA=pT1a (FIGO IA)' --format json");
  ASSERT_EQ(values.exit_code, 0) << values.err;
  const ValueMatchSet set = Json::parse(values.out).get<ValueMatchSet>();
  EXPECT_EQ(set.find("IA")->target_value, "pT1a (FIGO IA)");

  const fs::path spec = dir_ / "out.harmon.json";
  const CliResult built = run("build-spec " + common + " --auto-values -o " + spec.string());
  ASSERT_EQ(built.exit_code, 0) << built.err;
  const HarmonizationSpec parsed = parse_spec(testing::slurp(spec));
  ASSERT_TRUE(parsed.metadata);
  EXPECT_EQ(parsed.metadata->target_model, "gdc-subset");
}

TEST_F(CliTest, AssessAndExplain) {
  const std::string common = "--source " + fixture("pancreatic.csv") + " --target model:gdc-subset";
  const CliResult assess = run("assess " + common + " --format json");
  ASSERT_EQ(assess.exit_code, 0) << assess.err;
  EXPECT_EQ(Json::parse(assess.out)["assessments"]["pathologic_staging_n"]["verdict"], "corrected");
  const CliResult explain = run("explain " + common + " --attribute pathologic_staging_n");
  ASSERT_EQ(explain.exit_code, 0) << explain.err;
  EXPECT_NE(explain.out.find("preview_domain"), std::string::npos);
  EXPECT_NE(explain.out.find("rank_schema_matches"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
  const CliResult missing = run("match-schema --source /no/such.csv --target model:gdc-subset");
  EXPECT_EQ(missing.exit_code, 1);
  EXPECT_NE(missing.err.find("IoError"), std::string::npos);
  const CliResult unknown = run("rank --source " + fixture("endometrial.csv") + " --target model:gdc-subset --attribute Nope");
  EXPECT_EQ(unknown.exit_code, 2);
  EXPECT_NE(unknown.err.find("UnknownAttribute"), std::string::npos);
  EXPECT_EQ(run("match-schema --bogus-flag").exit_code, 2);
  EXPECT_EQ(run("matchers --format json").exit_code, 0);
}

TEST_F(CliTest, McpOverStdio) {
  const fs::path in = dir_ / "in.jsonl";
  {
    std::ofstream f(in);
    f << R"({"jsonrpc":"2.0","id":1,"method":"initialize"})" << "\n"
      << R"({"jsonrpc":"2.0","id":2,"method":"tools/list"})" << "\n";
  }
  const CliResult r = run("mcp < " + in.string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string first, second;
  std::getline(lines, first);
  std::getline(lines, second);
  EXPECT_EQ(Json::parse(first)["result"]["serverInfo"]["name"], "harmonkit");
  EXPECT_EQ(Json::parse(second)["result"]["tools"].size(), 11u);
}

}  // namespace
}  // namespace harmonkit
