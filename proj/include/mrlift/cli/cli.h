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

#ifndef MRLIFT_CLI_CLI_H_
#define MRLIFT_CLI_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "mrlift/pipeline/pipeline.h"

namespace mrlift::cli {

// Exit codes of every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitEnvironment = 2;

struct CliConfig {
  std::string corpus_dir = "corpus";
  std::string out_dir = "out";
  pipeline::PipelineConfig pipeline;
  // Size of the evaluation pool request: k inputs per response, R responses.
  int pool_k = 5;
  int pool_repetitions = 10;
  bool timings = false;
  bool force = false;
  bool reseal = false;
};

// Sets one `key = value` entry. Unknown keys and malformed values fail.
absl::Status ApplyConfigEntry(CliConfig& cfg, const std::string& key,
                              const std::string& value);

// Flat text file: one `key = value` per line, `#` starts a comment.
absl::Status LoadConfigFile(const std::string& path, CliConfig& cfg);

// Keys accepted by ApplyConfigEntry, sorted.
std::vector<std::string> ConfigKeys();

int CmdCheck(const std::vector<std::string>& paths, std::ostream& out,
             std::ostream& err);
int CmdAdopt(const CliConfig& cfg, const std::vector<std::string>& cases,
             bool all, std::ostream& out, std::ostream& err);
int CmdEval(const CliConfig& cfg, const std::vector<std::string>& cases,
            bool all, std::ostream& out, std::ostream& err);
int CmdRecord(const CliConfig& cfg, const std::vector<std::string>& cases,
              bool all, std::ostream& out, std::ostream& err);

// Full command line, `argv[0]` included.
int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace mrlift::cli

#endif  // MRLIFT_CLI_CLI_H_
