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

#ifndef MRLIFT_PIPELINE_PIPELINE_H_
#define MRLIFT_PIPELINE_PIPELINE_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "mrlift/generator/generator.h"
#include "mrlift/mtc/mtc.h"
#include "mrlift/runtime/interpreter.h"
#include "mrlift/testlang/checker.h"

namespace mrlift::pipeline {

using runtime::Bindings;

// One corpus case: `<dir>/sut.mtl`, `<dir>/mtc.mtl`, optional
// `<dir>/ground_truth.mtl` and `<dir>/meta.json`.
struct Case {
  std::string name;
  std::string dir;
  std::string sut_text;
  std::string mtc_text;
  testlang::Program mtc_program;
  runtime::SutRegistry registry;
  mtc::MtcModel model;
  std::optional<testlang::FuncDef> ground_truth;
  nlohmann::json meta = nlohmann::json::object();
};

// Loads and checks a case. The test is `meta.test` when given, else the
// single annotated test of mtc.mtl.
absl::StatusOr<Case> LoadCase(const std::string& dir);

// Case directories (those holding an mtc.mtl) under `corpus_dir`, sorted.
std::vector<std::string> DiscoverCases(const std::string& corpus_dir);

enum class Ablation { kNone, kV1, kV2, kV3 };

const char* AblationName(Ablation a);
absl::StatusOr<Ablation> ParseAblation(std::string_view text);

struct PipelineConfig {
  generator::GenConfig gen;
  // v1: the transformation prompt shows only the hard-coded pair.
  bool ablate_extra_pairs = false;
  // v2: no slicing of generated snippets or transformations, no helper
  // linking.
  bool ablate_refinement = false;
  // v3: the first compilable candidate wins regardless of applicability.
  bool ablate_assessment = false;
  bool dedup = true;
  runtime::Limits limits;

  void SetAblation(Ablation a);
  Ablation ablation() const;
};

// The generation context shared by every task of a case: printed SUT and
// test, structured model and registry.
generator::GenContext BaseContext(const Case& c, const PipelineConfig& cfg);

// Parses a generated snippet, slices it down to what builds `targets`
// (when `refine`), executes it and returns the targets' values.
absl::StatusOr<Bindings> RunSnippet(const Case& c, const std::string& code,
                                    const std::vector<std::string>& targets,
                                    bool refine, const runtime::Limits& limits);

// Pair snippet as shown to a generator.
std::string PrintPair(const mtc::MtcModel& m, const mtc::InputPair& pair);

// VALID iff the test body with the pair substituted executes OK.
mtc::Verdict ValidatePair(const mtc::MtcModel& m, mtc::InputPair& pair,
                          const runtime::SutRegistry& registry,
                          const runtime::Limits& limits);

struct Phase1Result {
  // VALID pairs; the hard-coded pair first.
  std::vector<mtc::InputPair> pairs;
  // Generated pairs that failed to execute or validate.
  std::vector<mtc::InputPair> rejected;
  // Distinct generated source inputs (the original excluded).
  std::vector<Bindings> sources;
  int snippets_seen = 0;
  int snippets_unusable = 0;
  int duplicates_removed = 0;
};

absl::StatusOr<Phase1Result> Phase1PreparePairs(
    const Case& c, const generator::Backend& backend,
    const PipelineConfig& cfg);

enum class CandidateStatus { kUnchecked, kUncompilable, kCompilable };

const char* CandidateStatusName(CandidateStatus s);

struct Applicability {
  int applicable = 0;
  int pool_size = 0;
  std::vector<bool> verdicts;
  // Per input: empty when applicable, else status and message.
  std::vector<std::string> reasons;
};

struct CandidateTransformation {
  int index = 0;
  int repetition = 0;
  std::string text;
  testlang::FuncDef fn;
  // Helpers linked by resolution, or extra functions of the block when
  // refinement is ablated.
  std::vector<testlang::FuncDef> linked;
  CandidateStatus status = CandidateStatus::kUnchecked;
  std::vector<std::string> diagnostics;
  // Statements removed by refinement.
  int sliced_away = 0;
  std::optional<Applicability> applicability;
};

absl::StatusOr<std::vector<CandidateTransformation>> Phase2Generate(
    const Case& c, const std::vector<mtc::InputPair>& pairs,
    const generator::Backend& backend, const PipelineConfig& cfg);

// Compiles one function (plus helpers it needs) the way Phase 2 does.
CandidateTransformation PrepareCandidate(const Case& c,
                                         const testlang::Program& block,
                                         const std::string& text, int index,
                                         const PipelineConfig& cfg);

// Helpers and candidate in one program, ready for execution.
testlang::Program ExecutionProgram(const Case& c,
                                   const CandidateTransformation& cand);

// Per-input applicability of one compiled candidate.
Applicability AssessOne(const Case& c, const CandidateTransformation& cand,
                        const std::vector<Bindings>& pool,
                        const runtime::Limits& limits, int parallelism = 1);

struct AssessmentReport {
  std::vector<CandidateTransformation> candidates;
  std::vector<Bindings> pool;
  std::optional<int> chosen;
  bool tie_broken = false;
};

AssessmentReport AssessCandidates(const Case& c,
                                  std::vector<CandidateTransformation> cands,
                                  std::vector<Bindings> pool,
                                  const PipelineConfig& cfg);

// applicable >= ceil(n/100 * pool_size), where n = 0 means at least one.
bool MeetsThreshold(int applicable, int pool_size, int n);

struct AdoptResult {
  std::string case_name;
  Phase1Result phase1;
  AssessmentReport report;
  std::string chosen_text;
  // Applicability of the chosen candidate on the evaluation pool, when one
  // was supplied.
  std::optional<Applicability> evaluation;
  std::map<std::string, double> timings_ms;
};

absl::StatusOr<AdoptResult> RunAdopt(
    const Case& c, const generator::Backend& backend,
    const PipelineConfig& cfg,
    const std::vector<Bindings>* evaluation_pool = nullptr);

// Stable JSON form of an adopt run. Timings appear only when requested.
nlohmann::json AdoptJson(const Case& c, const AdoptResult& r,
                         const PipelineConfig& cfg, bool with_timings);

}  // namespace mrlift::pipeline

#endif  // MRLIFT_PIPELINE_PIPELINE_H_
