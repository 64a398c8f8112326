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

#include <gtest/gtest.h>

#include "absl/strings/match.h"
#include "mrlift/pipeline/pipeline.h"
#include "mrlift/testlang/parser.h"

namespace mrlift::pipeline {
namespace {

std::string CaseDir(const std::string& name) {
  return std::string(MRLIFT_CORPUS_DIR) + "/" + name;
}

Case MustLoad(const std::string& name) {
  absl::StatusOr<Case> c = LoadCase(CaseDir(name));
  EXPECT_TRUE(c.ok()) << c.status();
  return *c;
}

CandidateTransformation Candidate(const Case& c, const std::string& text,
                                  int index, const PipelineConfig& cfg = {}) {
  auto block = testlang::ParseProgram(text, testlang::FuncOrigin::kTransformation);
  EXPECT_TRUE(block.ok()) << block.status();
  return PrepareCandidate(c, *block, text, index, cfg);
}

TEST(ThresholdTest, CeilingOfShare) {
  EXPECT_TRUE(MeetsThreshold(1, 10, 0));
  EXPECT_FALSE(MeetsThreshold(0, 10, 0));
  EXPECT_TRUE(MeetsThreshold(8, 10, 75));
  EXPECT_FALSE(MeetsThreshold(7, 10, 75));
  EXPECT_TRUE(MeetsThreshold(3, 4, 75));
  EXPECT_FALSE(MeetsThreshold(9, 10, 100));
  EXPECT_TRUE(MeetsThreshold(10, 10, 100));
}

TEST(AblationTest, NamesRoundTrip) {
  for (Ablation a : {Ablation::kNone, Ablation::kV1, Ablation::kV2,
                     Ablation::kV3}) {
    auto parsed = ParseAblation(AblationName(a));
    ASSERT_TRUE(parsed.ok());
    EXPECT_EQ(*parsed, a);
    PipelineConfig cfg;
    cfg.SetAblation(a);
    EXPECT_EQ(cfg.ablation(), a);
  }
  EXPECT_FALSE(ParseAblation("v4").ok());
}

TEST(CaseTest, CorpusLoads) {
  const std::vector<std::string> dirs = DiscoverCases(MRLIFT_CORPUS_DIR);
  EXPECT_GE(dirs.size(), 20u);
  for (const std::string& d : dirs) {
    absl::StatusOr<Case> c = LoadCase(d);
    EXPECT_TRUE(c.ok()) << d << ": " << c.status();
  }
}

TEST(SnippetTest, RefinementRescuesStrayStatements) {
  const Case c = MustLoad("leap_year");
  const std::string code =
      "#[source] let yearA = 1996;\n#[followup] let yearB = yearA + 400;\n"
      "assert yearA == 0;\n";
  auto refined = RunSnippet(c, code, {"yearA", "yearB"}, true, {});
  ASSERT_TRUE(refined.ok()) << refined.status();
  EXPECT_TRUE(runtime::ValueEq(refined->at("yearB"), runtime::Value(2396)));
  auto raw = RunSnippet(c, code, {"yearA", "yearB"}, false, {});
  ASSERT_FALSE(raw.ok());
  EXPECT_TRUE(absl::StartsWith(raw.status().message(), "ASSERT_FAIL"))
      << raw.status();
}

TEST(CandidateTest, DeadErroneousStatementNeedsRefinement) {
  const Case c = MustLoad("leap_year");
  const std::string text =
      "fn transform_leap_cycle(yearA) {\n  let x = nowhere(yearA);\n"
      "  return yearA + 400;\n}\n";
  EXPECT_EQ(Candidate(c, text, 0).status, CandidateStatus::kCompilable);
  PipelineConfig v2;
  v2.SetAblation(Ablation::kV2);
  EXPECT_EQ(Candidate(c, text, 0, v2).status, CandidateStatus::kUncompilable);
}

TEST(AssessTest, MostApplicableWinsAndTiesGoToFirst) {
  const Case c = MustLoad("leap_year");
  std::vector<Bindings> pool;
  for (int y : {2024, 1900, 2000, 2023, 1}) pool.push_back({{"yearA", y}});
  std::vector<CandidateTransformation> cands = {
      Candidate(c, "fn transform_leap_cycle(yearA) { return yearA + 1; }", 0),
      Candidate(c, "fn transform_leap_cycle(yearA) { return yearA + 400; }", 1),
      Candidate(c, "fn transform_leap_cycle(yearA) { return bad(yearA); }", 2),
      Candidate(c, "fn transform_leap_cycle(yearA) { return 400 + yearA; }", 3),
  };
  EXPECT_EQ(cands[2].status, CandidateStatus::kUncompilable);
  AssessmentReport r = AssessCandidates(c, cands, pool, {});
  ASSERT_TRUE(r.chosen.has_value());
  EXPECT_EQ(*r.chosen, 1);
  EXPECT_TRUE(r.tie_broken);
  EXPECT_EQ(r.candidates[1].applicability->applicable, 5);
  EXPECT_LT(r.candidates[0].applicability->applicable, 5);
  EXPECT_FALSE(r.candidates[2].applicability.has_value());

  PipelineConfig v3;
  v3.SetAblation(Ablation::kV3);
  AssessmentReport first = AssessCandidates(c, cands, pool, v3);
  EXPECT_EQ(first.chosen, 0);
}

TEST(AssessTest, NoCompilableCandidateChoosesNothing) {
  const Case c = MustLoad("leap_year");
  AssessmentReport r = AssessCandidates(
      c, {Candidate(c, "fn transform_leap_cycle(yearA) { return q; }", 0)},
      {{{"yearA", 2024}}}, {});
  EXPECT_FALSE(r.chosen.has_value());
}

TEST(AdoptTest, SynthRunIsDeterministic) {
  const Case c = MustLoad("leap_year");
  PipelineConfig cfg;
  cfg.gen.backend = generator::BackendKind::kSynth;
  cfg.gen.seed = 11;
  auto backend = generator::MakeSynthBackend();
  auto a = RunAdopt(c, *backend, cfg);
  cfg.gen.parallelism = 3;
  auto b = RunAdopt(c, *backend, cfg);
  ASSERT_TRUE(a.ok() && b.ok());
  cfg.gen.parallelism = 1;
  EXPECT_EQ(AdoptJson(c, *a, cfg, false).dump(),
            AdoptJson(c, *b, cfg, false).dump());
  EXPECT_FALSE(AdoptJson(c, *a, cfg, false).contains("timings_ms"));
  EXPECT_TRUE(AdoptJson(c, *a, cfg, true).contains("timings_ms"));
  ASSERT_TRUE(a->report.chosen.has_value());
  EXPECT_EQ(a->phase1.pairs.front().provenance, mtc::Provenance::kHardcoded);
}

}  // namespace
}  // namespace mrlift::pipeline
