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

#include "mrlift/evaluation/evaluation.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mrlift/testlang/parser.h"
#include "mrlift/testlang/printer.h"

namespace mrlift::evaluation {

using pipeline::Applicability;
using pipeline::Case;
using pipeline::CandidateTransformation;
using testlang::Program;

absl::StatusOr<CandidateTransformation> GroundTruthCandidate(const Case& c) {
  if (!c.ground_truth) {
    return absl::NotFoundError(absl::StrCat(c.name, ": no ground truth"));
  }
  Program block;
  block.functions.push_back(*c.ground_truth);
  CandidateTransformation gt = pipeline::PrepareCandidate(
      c, block, testlang::PrintFunction(*c.ground_truth), 0,
      pipeline::PipelineConfig{});
  if (gt.status != pipeline::CandidateStatus::kCompilable) {
    return absl::FailedPreconditionError(
        absl::StrCat(c.name, ": ground truth does not compile"));
  }
  return gt;
}

absl::StatusOr<SourcePool> PrepareSourcePool(const Case& c,
                                             const generator::Backend& backend,
                                             const pipeline::PipelineConfig& cfg) {
  SourcePool pool;
  pool.case_name = c.name;
  absl::StatusOr<mtc::InputPair> hard =
      mtc::HardcodedPair(c.model, c.registry, cfg.limits);
  if (!hard.ok()) return hard.status();

  std::vector<Bindings> candidates = {hard->source};
  std::set<std::string> seen = {mtc::CanonicalText(hard->source)};

  pipeline::PipelineConfig plain = cfg;
  plain.SetAblation(pipeline::Ablation::kNone);
  generator::GenContext ctx = pipeline::BaseContext(c, plain);
  ctx.task = generator::Task::kSourceInputs;
  ctx.pairs = {*hard};
  absl::StatusOr<std::vector<generator::RawCandidate>> raw =
      generator::Generate(ctx, cfg.gen, backend);
  if (!raw.ok()) return raw.status();
  for (const generator::RawCandidate& r : *raw) {
    for (const std::string& code : generator::ExtractCodeBlocks(r.text)) {
      ++pool.raw_count;
      absl::StatusOr<Bindings> input = pipeline::RunSnippet(
          c, code, c.model.source_vars, /*refine=*/true, cfg.limits);
      if (!input.ok()) {
        ++pool.invalid_removed;
        continue;
      }
      if (!seen.insert(mtc::CanonicalText(*input)).second) {
        ++pool.dedup_removed;
        continue;
      }
      candidates.push_back(*std::move(input));
    }
  }

  if (!c.ground_truth) {
    pool.warnings.push_back(absl::StrCat(
        c.name, ": no ground_truth.mtl, validity filter skipped"));
    pool.inputs = std::move(candidates);
    return pool;
  }
  absl::StatusOr<CandidateTransformation> gt = GroundTruthCandidate(c);
  if (!gt.ok()) return gt.status();
  const Applicability a = pipeline::AssessOne(c, *gt, candidates, cfg.limits,
                                              cfg.gen.parallelism);
  pool.validity_filtered = true;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (a.verdicts[i]) {
      pool.inputs.push_back(std::move(candidates[i]));
    } else {
      ++pool.invalid_removed;
    }
  }
  return pool;
}

std::map<int, bool> MetricGeneralizable(const Applicability& a,
                                        const std::vector<int>& thresholds) {
  std::map<int, bool> out;
  for (int n : thresholds) {
    out[n] = pipeline::MeetsThreshold(a.applicable, a.pool_size, n);
  }
  return out;
}

FollowupValidity MetricValidFollowups(const Case& c,
                                      const CandidateTransformation& t,
                                      const std::vector<Bindings>& pool,
                                      const runtime::Limits& limits) {
  const Applicability a = pipeline::AssessOne(c, t, pool, limits);
  return {a.applicable, a.pool_size};
}

namespace {

absl::StatusOr<std::optional<Program>> LoadTests(const Case& c,
                                                 const std::string& file) {
  namespace fs = std::filesystem;
  const fs::path path = fs::path(c.dir) / file;
  if (!fs::exists(path)) return std::optional<Program>();
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  absl::StatusOr<Program> p =
      testlang::ParseProgram(ss.str(), testlang::FuncOrigin::kHelper);
  if (!p.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(file, ": ", std::string(p.status().message())));
  }
  const testlang::CheckReport report =
      testlang::CheckProgram(*p, c.registry.signatures());
  if (!report.ok) {
    std::string text;
    for (const testlang::Diagnostic& d : report.diagnostics) {
      absl::StrAppend(&text, "\n  ", testlang::FormatDiagnostic(d));
    }
    return absl::InvalidArgumentError(absl::StrCat(file, ": check failed", text));
  }
  return std::optional<Program>(*std::move(p));
}

Suite TestsOf(const std::string& name, const Program& program) {
  Suite s;
  s.name = name;
  Program functions;
  functions.functions = program.functions;
  for (const testlang::TestDef& t : program.tests) {
    s.tests.push_back({t.name, t.body, functions});
  }
  return s;
}

}  // namespace

absl::StatusOr<std::vector<Suite>> BuildSuites(
    const Case& c, const CandidateTransformation* chosen,
    const std::vector<Bindings>& pool, const runtime::Limits& limits) {
  std::vector<Suite> suites;
  suites.push_back(TestsOf("mtc", c.mtc_program));

  absl::StatusOr<std::optional<Program>> dev = LoadTests(c, "dev_tests.mtl");
  if (!dev.ok()) return dev.status();
  suites.push_back(*dev ? TestsOf("dev", **dev) : Suite{"dev", {}});

  Suite m{"M", {}};
  if (chosen != nullptr &&
      chosen->status == pipeline::CandidateStatus::kCompilable) {
    const Program program = pipeline::ExecutionProgram(c, *chosen);
    for (size_t i = 0; i < pool.size(); ++i) {
      absl::StatusOr<testlang::Block> block =
          mtc::InstantiateWithTransformation(c.model, chosen->fn, pool[i]);
      if (!block.ok()) continue;
      const runtime::ExecutionOutcome out =
          runtime::Execute(*block, {}, c.registry, limits, &program);
      if (out.status != runtime::ExecStatus::kOk) continue;
      m.tests.push_back(
          {absl::StrCat(c.model.test_name, "[", i, "]"), *block, program});
    }
  }
  suites.push_back(std::move(m));

  absl::StatusOr<std::optional<Program>> llm = LoadTests(c, "llm_tests.mtl");
  if (!llm.ok()) return llm.status();
  suites.push_back(*llm ? TestsOf("L", **llm) : Suite{"L", {}});
  return suites;
}

const std::map<std::string, std::vector<std::string>>& StandardCombos() {
  static const std::map<std::string, std::vector<std::string>> combos = {
      {"D", {"mtc", "dev"}},
      {"D+M", {"mtc", "dev", "M"}},
      {"D+L", {"mtc", "dev", "L"}},
      {"D+L+M", {"mtc", "dev", "L", "M"}},
      {"MR", {"mtc", "M"}},
      {"non-MR", {"dev", "L"}},
  };
  return combos;
}

void AdequacyTotals::Add(const AdequacyComparison& a) {
  statements += a.sut_statements;
  scored_mutants += a.generated - static_cast<int>(a.equivalent.size());
  for (const auto& [combo, set] : a.covered) {
    covered[combo] += static_cast<int>(set.size());
  }
  for (const auto& [combo, set] : a.killed) {
    killed[combo] += static_cast<int>(set.size());
  }
}

double AdequacyTotals::Coverage(const std::string& combo) const {
  auto it = covered.find(combo);
  if (it == covered.end() || statements == 0) return 0.0;
  return static_cast<double>(it->second) / statements;
}

double AdequacyTotals::Score(const std::string& combo) const {
  auto it = killed.find(combo);
  if (it == killed.end() || scored_mutants == 0) return 0.0;
  return static_cast<double>(it->second) / scored_mutants;
}

nlohmann::json AdequacyJson(const AdequacyComparison& a,
                            const std::vector<Mutant>& mutants) {
  nlohmann::json j;
  j["sut_statements"] = a.sut_statements;
  j["generated"] = a.generated;
  j["equivalent"] = a.equivalent;
  nlohmann::json combos = nlohmann::json::object();
  for (const auto& [name, members] : a.combos) {
    combos[name] = {{"suites", members},
                    {"line_coverage", a.line_coverage.at(name)},
                    {"mutation_score", a.mutation_score.at(name)},
                    {"covered", a.covered.at(name).size()},
                    {"killed", a.killed.at(name)}};
  }
  j["combos"] = std::move(combos);
  nlohmann::json list = nlohmann::json::array();
  for (const Mutant& m : mutants) {
    nlohmann::json mj = {{"id", m.id},
                         {"operator", MutationOperatorName(m.op)},
                         {"function", m.location.function},
                         {"description", m.description},
                         {"equivalent", a.equivalent.contains(m.id)}};
    auto it = a.matrix.find(m.id);
    if (it != a.matrix.end()) mj["killed_by"] = it->second;
    list.push_back(std::move(mj));
  }
  j["mutants"] = std::move(list);
  return j;
}

std::string AdequacyCsv(const AdequacyTotals& totals,
                        const std::vector<std::string>& combos) {
  std::string out = "combo,line_coverage,mutation_score\n";
  for (const std::string& c : combos) {
    absl::StrAppend(&out, c, ",",
                    absl::StrFormat("%.4f,%.4f", totals.Coverage(c),
                                    totals.Score(c)),
                    "\n");
  }
  return out;
}

}  // namespace mrlift::evaluation
