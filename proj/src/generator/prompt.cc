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

#include <openssl/evp.h>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "mrlift/generator/generator.h"
#include "mrlift/testlang/parser.h"

namespace mrlift::generator {

const char* TaskName(Task task) {
  switch (task) {
    case Task::kSourceInputs:
      return "source_inputs";
    case Task::kInputPairs:
      return "input_pairs";
    case Task::kTransformation:
      return "transformation";
  }
  return "?";
}

const char* BackendKindName(BackendKind kind) {
  switch (kind) {
    case BackendKind::kReplay:
      return "replay";
    case BackendKind::kSynth:
      return "synth";
    case BackendKind::kHttp:
      return "http";
  }
  return "?";
}

absl::StatusOr<BackendKind> ParseBackendKind(std::string_view text) {
  if (text == "replay") return BackendKind::kReplay;
  if (text == "synth") return BackendKind::kSynth;
  if (text == "http") return BackendKind::kHttp;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown backend '", std::string(text),
                   "' (expected replay, synth or http)"));
}

absl::StatusOr<SynthProfile> ParseSynthProfile(std::string_view text) {
  SynthProfile p;
  if (text.empty() || text == "default") return p;
  for (absl::string_view item : absl::StrSplit(std::string(text), ',')) {
    std::pair<std::string, std::string> kv =
        absl::StrSplit(std::string(item), absl::MaxSplits('=', 1));
    double v = 0;
    if (!absl::SimpleAtod(kv.second, &v) || v < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("synth profile: bad weight in '", std::string(item), "'"));
    }
    if (kv.first == "correct") {
      p.correct = v;
    } else if (kv.first == "overfit") {
      p.overfit = v;
    } else if (kv.first == "dead_erroneous") {
      p.dead_erroneous = v;
    } else if (kv.first == "uncompilable") {
      p.uncompilable = v;
    } else if (kv.first == "invalid_pair") {
      p.invalid_pair = v;
    } else if (kv.first == "stray_assert") {
      p.stray_assert = v;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("synth profile: unknown category '", kv.first, "'"));
    }
  }
  return p;
}

absl::Status ValidateGenConfig(const GenConfig& cfg) {
  if (cfg.k < 1) return absl::InvalidArgumentError("k must be at least 1");
  if (cfg.repetitions < 1) {
    return absl::InvalidArgumentError("repetitions must be at least 1");
  }
  if (!(cfg.temperature >= 0.0 && cfg.temperature <= 2.0)) {
    return absl::InvalidArgumentError("temperature must lie in [0, 2]");
  }
  if (cfg.parallelism < 1) {
    return absl::InvalidArgumentError("parallelism must be at least 1");
  }
  return absl::OkStatus();
}

namespace {

constexpr char kSystem[] =
    "You are an expert in metamorphic testing. A metamorphic relation links "
    "a source input to a follow-up input and the outputs of the methods "
    "under test on both. Programs are written in MTL; reply with MTL code in "
    "fenced ``` blocks only.";

std::string Fenced(const std::string& code) {
  std::string body = code;
  if (!body.empty() && body.back() != '\n') body.push_back('\n');
  return absl::StrCat("```mtl\n", body, "```\n");
}

std::string OutputFormat(const GenContext& ctx, const GenConfig& cfg) {
  switch (ctx.task) {
    case Task::kSourceInputs:
      return absl::StrFormat(
          "Write %d new source inputs for the test case. Put each one in its "
          "own fenced block containing only its `#[source]` let "
          "statement(s), with the same variable names as the test.\n",
          cfg.k);
    case Task::kInputPairs:
      return "For every source input above, write one fenced block that "
             "constructs the source input and its follow-up input so that "
             "the test's assertions hold. Mark the definitions with "
             "`#[source]` and `#[followup]` and keep the variable names of "
             "the test.\n";
    case Task::kTransformation:
      return absl::StrCat(
          "Implement the input transformation that computes the follow-up "
          "input(s) from the source input(s) for every input pair above. "
          "Complete this function and return it in one fenced block:\n",
          ctx.skeleton ? Fenced(mtc::PrintSkeleton(*ctx.skeleton)) : "");
  }
  return "";
}

}  // namespace

std::string AssemblePrompt(const GenContext& ctx, const GenConfig& cfg) {
  std::string out = absl::StrCat("### System\n", kSystem, "\n\n");
  absl::StrAppend(&out, "### Methods under test\n", Fenced(ctx.mut_code),
                  "\n");
  absl::StrAppend(&out, "### Metamorphic test case\n", Fenced(ctx.mtc_code),
                  "\n");
  if (!ctx.example_pairs.empty()) {
    absl::StrAppend(&out, "### Example input pairs\n");
    for (const std::string& p : ctx.example_pairs) {
      absl::StrAppend(&out, Fenced(p));
    }
    absl::StrAppend(&out, "\n");
  }
  if (!ctx.source_inputs.empty()) {
    absl::StrAppend(&out, "### Source inputs\n");
    for (const std::string& s : ctx.source_inputs) {
      absl::StrAppend(&out, Fenced(s));
    }
    absl::StrAppend(&out, "\n");
  }
  absl::StrAppend(&out, "### Output format\n", OutputFormat(ctx, cfg));
  return out;
}

std::string RequestDigest(const std::string& prompt, const GenConfig& cfg) {
  const std::string material = absl::StrCat(
      absl::StrFormat("temperature=%.3f\n", cfg.temperature), prompt);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(material.data(), material.size(), md, &len, EVP_sha256(),
             nullptr);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    absl::StrAppend(&hex, absl::Hex(md[i], absl::kZeroPad2));
  }
  return hex;
}

std::vector<std::string> ExtractCodeBlocks(
    const std::string& raw,
    const std::optional<mtc::TransformationSkeleton>& expect) {
  std::vector<std::string> blocks;
  size_t pos = 0;
  while (true) {
    size_t open = raw.find("```", pos);
    if (open == std::string::npos) break;
    size_t body = raw.find('\n', open);
    if (body == std::string::npos) break;
    size_t close = raw.find("```", body + 1);
    if (close == std::string::npos) break;
    blocks.push_back(raw.substr(body + 1, close - body - 1));
    pos = close + 3;
  }
  if (!expect) return blocks;
  std::vector<std::string> kept;
  for (const std::string& b : blocks) {
    absl::StatusOr<testlang::Program> p =
        testlang::ParseProgram(b, testlang::FuncOrigin::kTransformation);
    if (!p.ok()) continue;
    const testlang::FuncDef* fn = p->FindFunction(expect->fn_name);
    if (fn != nullptr && mtc::MatchSkeleton(*fn, *expect).ok()) {
      kept.push_back(b);
    }
  }
  return kept;
}

}  // namespace mrlift::generator
