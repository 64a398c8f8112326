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

#ifndef MRLIFT_EVALUATION_EVALUATION_H_
#define MRLIFT_EVALUATION_EVALUATION_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "mrlift/pipeline/pipeline.h"

namespace mrlift::evaluation {

using runtime::Bindings;

// Source inputs used to measure generalizability. The original source comes
// first.
struct SourcePool {
  std::string case_name;
  std::vector<Bindings> inputs;
  // Generated snippets seen, before any filtering.
  int raw_count = 0;
  int dedup_removed = 0;
  // Unusable snippets plus inputs the ground truth cannot handle.
  int invalid_removed = 0;
  bool validity_filtered = false;
  std::vector<std::string> warnings;
};

// Asks `backend` for source inputs (cfg.gen.k per response,
// cfg.gen.repetitions responses), dedups them by canonical text and, when
// the case has a ground truth, keeps only inputs it is applicable to.
absl::StatusOr<SourcePool> PrepareSourcePool(const pipeline::Case& c,
                                             const generator::Backend& backend,
                                             const pipeline::PipelineConfig& cfg);

// Ground truth compiled like a generated candidate.
absl::StatusOr<pipeline::CandidateTransformation> GroundTruthCandidate(
    const pipeline::Case& c);

// threshold -> applicable >= ceil(n% of pool), n = 0 meaning at least one.
std::map<int, bool> MetricGeneralizable(
    const pipeline::Applicability& a,
    const std::vector<int>& thresholds = {0, 75, 100});

struct FollowupValidity {
  int valid = 0;
  int total = 0;
};

// Follow-ups produced by `t` on `pool` that satisfy the relation asserts.
FollowupValidity MetricValidFollowups(const pipeline::Case& c,
                                      const pipeline::CandidateTransformation& t,
                                      const std::vector<Bindings>& pool,
                                      const runtime::Limits& limits);

enum class MutationOperator { kAor, kRor, kConstPerturb, kBoolNeg, kStmtDel, kSeeded };

const char* MutationOperatorName(MutationOperator op);

struct MutantLocation {
  std::string function;
  testlang::StmtPath stmt;
  // Index of the statement's own expression, then the pre-order index of the
  // mutated node inside it. Empty for statement deletion.
  std::vector<int> expr;
};

struct Mutant {
  int id = 0;
  MutationOperator op = MutationOperator::kAor;
  MutantLocation location;
  std::string description;
  runtime::SutRegistry registry;
};

inline const std::set<MutationOperator>& AllGeneratedOperators() {
  static const std::set<MutationOperator> ops = {
      MutationOperator::kAor, MutationOperator::kRor,
      MutationOperator::kConstPerturb, MutationOperator::kBoolNeg,
      MutationOperator::kStmtDel};
  return ops;
}

// Every first-order mutant of the registry for the chosen operators, in
// (function, statement, expression, variant) order. Mutants that fail the
// checker are dropped. Ids start at `first_id`.
std::vector<Mutant> MutateSut(
    const runtime::SutRegistry& registry,
    const std::set<MutationOperator>& ops = AllGeneratedOperators(),
    int first_id = 0);

// Hand-written faulty versions of the SUT: every `<case>/mutants/*.mtl`,
// named after the file.
absl::StatusOr<std::vector<Mutant>> LoadSeededMutants(const pipeline::Case& c,
                                                      int first_id);

struct TestBlock {
  std::string name;
  testlang::Block body;
  // Helpers and transformations the block calls.
  testlang::Program functions;
};

struct Suite {
  std::string name;
  std::vector<TestBlock> tests;
};

struct AdequacyComparison {
  // Combo name ("D+M") -> suite names.
  std::map<std::string, std::vector<std::string>> combos;
  std::map<std::string, double> line_coverage;
  std::map<std::string, double> mutation_score;
  std::map<std::string, std::set<int>> killed;
  std::map<std::string, std::set<int>> killed_by_suite;
  std::map<std::string, std::set<std::string>> covered;
  int sut_statements = 0;
  int generated = 0;
  // Mutants indistinguishable from the original on every test block.
  std::set<int> equivalent;
  // mutant id -> suite -> per-test killed flags.
  std::map<int, std::map<std::string, std::vector<bool>>> matrix;
};

// Runs every suite on the original and on each mutant. Fails if a test does
// not pass on the original registry.
absl::StatusOr<AdequacyComparison> RunMutationTesting(
    const runtime::SutRegistry& original, const std::vector<Suite>& suites,
    const std::vector<Mutant>& mutants,
    const std::map<std::string, std::vector<std::string>>& combos,
    const runtime::Limits& limits, int parallelism = 1);

// The suites of a case. D: every test of mtc.mtl and dev_tests.mtl.
// M: the chosen transformation instantiated over `pool` (inputs it is not
// applicable to are skipped). L: llm_tests.mtl when present. N: the non-MR
// tests, dev_tests.mtl and llm_tests.mtl.
absl::StatusOr<std::vector<Suite>> BuildSuites(
    const pipeline::Case& c, const pipeline::CandidateTransformation* chosen,
    const std::vector<Bindings>& pool, const runtime::Limits& limits);

const std::map<std::string, std::vector<std::string>>& StandardCombos();

// Sums of per-case comparisons: coverage and score over the pooled
// statement and mutant counts.
struct AdequacyTotals {
  std::map<std::string, int> covered;
  std::map<std::string, int> killed;
  int statements = 0;
  int scored_mutants = 0;

  void Add(const AdequacyComparison& a);
  double Coverage(const std::string& combo) const;
  double Score(const std::string& combo) const;
};

nlohmann::json AdequacyJson(const AdequacyComparison& a,
                            const std::vector<Mutant>& mutants);

// "combo,line_coverage,mutation_score" rows.
std::string AdequacyCsv(const AdequacyTotals& totals,
                        const std::vector<std::string>& combos);

}  // namespace mrlift::evaluation

#endif  // MRLIFT_EVALUATION_EVALUATION_H_
