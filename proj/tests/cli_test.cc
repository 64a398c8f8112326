// Copyright 2026 The mrlift Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "mrlift/cli/cli.h"

namespace mrlift::cli {
namespace {

namespace fs = std::filesystem;

int RunArgs(std::vector<std::string> args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
  args.insert(args.begin(), "mrlift");
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int rc = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

TEST(ConfigTest, EntriesAndErrors) {
  CliConfig cfg;
  EXPECT_TRUE(ApplyConfigEntry(cfg, "k", "3").ok());
  EXPECT_EQ(cfg.pipeline.gen.k, 3);
  EXPECT_TRUE(ApplyConfigEntry(cfg, "backend", "synth").ok());
  EXPECT_EQ(cfg.pipeline.gen.backend, generator::BackendKind::kSynth);
  EXPECT_TRUE(ApplyConfigEntry(cfg, "ablate", "v2").ok());
  EXPECT_TRUE(cfg.pipeline.ablate_refinement);
  EXPECT_FALSE(ApplyConfigEntry(cfg, "k", "many").ok());
  EXPECT_FALSE(ApplyConfigEntry(cfg, "colour", "blue").ok());
  const std::vector<std::string> keys = ConfigKeys();
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
}

TEST(ConfigTest, FileWithComments) {
  const fs::path p = fs::temp_directory_path() / "mrlift_cli_test.cfg";
  {
    std::ofstream f(p);
    f << "# comment\nseed = 9\n\nrepetitions = 2  # trailing\n";
  }
  CliConfig cfg;
  ASSERT_TRUE(LoadConfigFile(p.string(), cfg).ok());
  EXPECT_EQ(cfg.pipeline.gen.seed, 9u);
  EXPECT_EQ(cfg.pipeline.gen.repetitions, 2);
}

TEST(CliTest, CheckCorpus) {
  std::string out;
  EXPECT_EQ(RunArgs({"check", MRLIFT_CORPUS_DIR}, &out), kExitOk) << out;
}

TEST(CliTest, CheckMissingPathIsEnvironmentError) {
  EXPECT_EQ(RunArgs({"check", "/nonexistent/mrlift"}), kExitEnvironment);
}

TEST(CliTest, CheckReportsBadFile) {
  const fs::path p = fs::temp_directory_path() / "mrlift_bad.mtl";
  {
    std::ofstream f(p);
    f << "fn f(a) { return g(a); }\n";
  }
  std::string err;
  EXPECT_EQ(RunArgs({"check", p.string()}, nullptr, &err), kExitFailure);
}

TEST(CliTest, AdoptNeedsCaseOrAll) {
  EXPECT_EQ(RunArgs({"--corpus", MRLIFT_CORPUS_DIR, "adopt"}), kExitEnvironment);
}

TEST(CliTest, UnknownBackendIsRejected) {
  EXPECT_NE(RunArgs({"--backend", "oracle", "adopt", "leap_year"}), kExitOk);
}

TEST(CliTest, AdoptWritesReport) {
  const fs::path out = fs::temp_directory_path() / "mrlift_cli_adopt";
  fs::remove_all(out);
  EXPECT_EQ(RunArgs({"--corpus", MRLIFT_CORPUS_DIR, "--out", out.string(),
                 "adopt", "leap_year"}),
            kExitOk);
  EXPECT_TRUE(fs::exists(out / "leap_year" / "adopt.json"));
  EXPECT_TRUE(fs::exists(out / "leap_year" / "transform.mtl"));
}

TEST(CliTest, RecordRefusesReplayWithoutReseal) {
  EXPECT_EQ(RunArgs({"--corpus", MRLIFT_CORPUS_DIR, "record", "leap_year"}),
            kExitEnvironment);
}

}  // namespace
}  // namespace mrlift::cli
