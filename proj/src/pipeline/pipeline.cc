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

#include "mrlift/pipeline/pipeline.h"

#include <chrono>
#include <cmath>
#include <set>

#include "absl/strings/str_cat.h"
#include "mrlift/analysis/resolver.h"
#include "mrlift/analysis/slicer.h"
#include "mrlift/testlang/parser.h"
#include "mrlift/testlang/printer.h"
#include "mrlift/util/parallel.h"

namespace mrlift::pipeline {

using testlang::FuncDef;
using testlang::Program;

const char* AblationName(Ablation a) {
  switch (a) {
    case Ablation::kNone:
      return "none";
    case Ablation::kV1:
      return "v1";
    case Ablation::kV2:
      return "v2";
    case Ablation::kV3:
      return "v3";
  }
  return "?";
}

absl::StatusOr<Ablation> ParseAblation(std::string_view text) {
  if (text == "none" || text.empty()) return Ablation::kNone;
  if (text == "v1") return Ablation::kV1;
  if (text == "v2") return Ablation::kV2;
  if (text == "v3") return Ablation::kV3;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown ablation '", std::string(text), "' (expected v1, v2 or v3)"));
}

void PipelineConfig::SetAblation(Ablation a) {
  ablate_extra_pairs = a == Ablation::kV1;
  ablate_refinement = a == Ablation::kV2;
  ablate_assessment = a == Ablation::kV3;
}

Ablation PipelineConfig::ablation() const {
  if (ablate_extra_pairs) return Ablation::kV1;
  if (ablate_refinement) return Ablation::kV2;
  if (ablate_assessment) return Ablation::kV3;
  return Ablation::kNone;
}

const char* CandidateStatusName(CandidateStatus s) {
  switch (s) {
    case CandidateStatus::kUnchecked:
      return "UNCHECKED";
    case CandidateStatus::kUncompilable:
      return "UNCOMPILABLE";
    case CandidateStatus::kCompilable:
      return "COMPILABLE";
  }
  return "?";
}

bool MeetsThreshold(int applicable, int pool_size, int n) {
  if (n == 0) return applicable >= 1;
  const int64_t need = (static_cast<int64_t>(n) * pool_size + 99) / 100;
  return applicable >= need;
}

namespace {

std::string StatusText(const runtime::ExecutionOutcome& out) {
  return absl::StrCat(runtime::ExecStatusName(out.status),
                      out.error ? absl::StrCat(": ", *out.error) : "");
}

Program PrintableTest(const Case& c) {
  Program p;
  p.functions = c.mtc_program.functions;
  p.tests.push_back(*c.mtc_program.FindTest(c.model.test_name));
  return p;
}

std::string SourceSnippet(const mtc::MtcModel& m, const Bindings& source) {
  testlang::Block block;
  for (size_t i = 0; i < m.source_vars.size(); ++i) {
    testlang::Stmt let = testlang::MakeLet(
        m.source_vars[i], runtime::Literalize(source.at(m.source_vars[i])),
        {mtc::kSourceAnnotation});
    std::get<testlang::LetStmt>(let.node).type = m.source_types[i];
    block.stmts.push_back(std::move(let));
  }
  testlang::RenumberStatements(block);
  return testlang::PrintStatements(block);
}

Bindings Subset(const Bindings& all, const std::vector<std::string>& names) {
  Bindings out;
  for (const std::string& n : names) out[n] = all.at(n);
  return out;
}

}  // namespace

absl::StatusOr<Bindings> RunSnippet(const Case& c, const std::string& code,
                                    const std::vector<std::string>& targets,
                                    bool refine, const runtime::Limits& limits) {
  absl::StatusOr<testlang::Block> block = testlang::ParseStatements(code);
  if (!block.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("parse: ", std::string(block.status().message())));
  }
  if (refine) {
    const analysis::CallContext ctx{&c.mtc_program, &c.registry.program()};
    absl::StatusOr<testlang::Block> refined = analysis::RefineSnippet(
        *block, std::set<std::string>(targets.begin(), targets.end()), ctx);
    if (!refined.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("refine: ", std::string(refined.status().message())));
    }
    block = std::move(refined);
  }
  const Program helpers = mtc::HelperProgram(c.model);
  const runtime::ExecutionOutcome out =
      runtime::Execute(*block, {}, c.registry, limits, &helpers);
  if (out.status != runtime::ExecStatus::kOk) {
    return absl::AbortedError(StatusText(out));
  }
  Bindings values;
  for (const std::string& t : targets) {
    auto it = out.bindings.find(t);
    if (it == out.bindings.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("snippet does not define '", t, "'"));
    }
    values[t] = it->second;
  }
  return values;
}

namespace {

// Best-effort values of the input variables of a snippet that failed to run:
// its top-level annotated lets, executed on their own. Only used to label
// rejected pairs in reports.
Bindings DeclaredInputs(const Case& c, const std::string& code,
                        const std::vector<std::string>& targets,
                        const runtime::Limits& limits) {
  absl::StatusOr<testlang::Block> block = testlang::ParseStatements(code);
  if (!block.ok()) return {};
  testlang::Block lets;
  for (const testlang::Stmt& s : block->stmts) {
    const auto* let = std::get_if<testlang::LetStmt>(&s.node);
    if (let == nullptr || s.annotations.empty()) continue;
    if (std::find(targets.begin(), targets.end(), let->name) == targets.end()) {
      continue;
    }
    lets.stmts.push_back(s);
  }
  testlang::RenumberStatements(lets);
  const runtime::ExecutionOutcome out =
      runtime::Execute(lets, {}, c.registry, limits, nullptr);
  if (out.status != runtime::ExecStatus::kOk) return {};
  Bindings values;
  for (const std::string& t : targets) {
    auto it = out.bindings.find(t);
    if (it != out.bindings.end()) values[t] = it->second;
  }
  return values;
}

}  // namespace

generator::GenContext BaseContext(const Case& c, const PipelineConfig& cfg) {
  generator::GenContext ctx;
  ctx.mut_code = testlang::PrintProgram(c.registry.program());
  ctx.mtc_code = testlang::PrintProgram(PrintableTest(c));
  ctx.model = &c.model;
  ctx.registry = &c.registry;
  switch (cfg.ablation()) {
    case Ablation::kV1:
      ctx.label = "v1";
      break;
    case Ablation::kV2:
      ctx.label = "v2";
      break;
    default:
      ctx.label = "default";
      break;
  }
  return ctx;
}

std::string PrintPair(const mtc::MtcModel& m, const mtc::InputPair& pair) {
  testlang::Block block;
  for (size_t i = 0; i < m.source_vars.size(); ++i) {
    testlang::Stmt let = testlang::MakeLet(
        m.source_vars[i], runtime::Literalize(pair.source.at(m.source_vars[i])),
        {mtc::kSourceAnnotation});
    std::get<testlang::LetStmt>(let.node).type = m.source_types[i];
    block.stmts.push_back(std::move(let));
  }
  for (size_t i = 0; i < m.followup_vars.size(); ++i) {
    testlang::Stmt let = testlang::MakeLet(
        m.followup_vars[i],
        runtime::Literalize(pair.followup.at(m.followup_vars[i])),
        {mtc::kFollowupAnnotation});
    std::get<testlang::LetStmt>(let.node).type = m.followup_types[i];
    block.stmts.push_back(std::move(let));
  }
  testlang::RenumberStatements(block);
  return testlang::PrintStatements(block);
}

mtc::Verdict ValidatePair(const mtc::MtcModel& m, mtc::InputPair& pair,
                          const runtime::SutRegistry& registry,
                          const runtime::Limits& limits) {
  absl::StatusOr<testlang::Block> block = mtc::SubstituteInputs(m, pair);
  if (!block.ok()) {
    pair.verdict = mtc::Verdict::kInvalid;
    pair.reason = std::string(block.status().message());
    return pair.verdict;
  }
  const Program helpers = mtc::HelperProgram(m);
  const runtime::ExecutionOutcome out =
      runtime::Execute(*block, {}, registry, limits, &helpers);
  if (out.status == runtime::ExecStatus::kOk) {
    pair.verdict = mtc::Verdict::kValid;
    pair.reason.clear();
  } else {
    pair.verdict = mtc::Verdict::kInvalid;
    pair.reason = StatusText(out);
  }
  return pair.verdict;
}

absl::StatusOr<Phase1Result> Phase1PreparePairs(
    const Case& c, const generator::Backend& backend,
    const PipelineConfig& cfg) {
  const mtc::MtcModel& m = c.model;
  Phase1Result result;
  absl::StatusOr<mtc::InputPair> hard =
      mtc::HardcodedPair(m, c.registry, cfg.limits);
  if (!hard.ok()) return hard.status();
  ValidatePair(m, *hard, c.registry, cfg.limits);
  result.pairs.push_back(*hard);
  const bool refine = !cfg.ablate_refinement;

  // Step one: new source inputs.
  generator::GenContext ctx = BaseContext(c, cfg);
  ctx.task = generator::Task::kSourceInputs;
  ctx.pairs = {*hard};
  absl::StatusOr<std::vector<generator::RawCandidate>> raw =
      generator::Generate(ctx, cfg.gen, backend);
  if (!raw.ok()) return raw.status();
  std::set<std::string> seen_sources = {mtc::CanonicalText(hard->source)};
  for (const generator::RawCandidate& r : *raw) {
    for (const std::string& code : generator::ExtractCodeBlocks(r.text)) {
      ++result.snippets_seen;
      absl::StatusOr<Bindings> run =
          RunSnippet(c, code, m.source_vars, refine, cfg.limits);
      if (!run.ok()) {
        ++result.snippets_unusable;
        continue;
      }
      if (!seen_sources.insert(mtc::CanonicalText(*run)).second &&
          cfg.dedup) {
        ++result.duplicates_removed;
        continue;
      }
      result.sources.push_back(*std::move(run));
    }
  }
  if (result.sources.empty()) return result;

  // Step two: follow-ups for those sources, with the hard-coded pair as the
  // worked example.
  ctx.task = generator::Task::kInputPairs;
  ctx.example_pairs = {PrintPair(m, *hard)};
  ctx.sources = result.sources;
  for (const Bindings& s : result.sources) {
    ctx.source_inputs.push_back(SourceSnippet(m, s));
  }
  raw = generator::Generate(ctx, cfg.gen, backend);
  if (!raw.ok()) return raw.status();
  std::vector<std::string> targets = m.source_vars;
  targets.insert(targets.end(), m.followup_vars.begin(), m.followup_vars.end());
  std::set<std::string> seen_pairs = {absl::StrCat(
      mtc::CanonicalText(hard->source), " | ",
      mtc::CanonicalText(hard->followup))};
  for (const generator::RawCandidate& r : *raw) {
    for (const std::string& code : generator::ExtractCodeBlocks(r.text)) {
      ++result.snippets_seen;
      mtc::InputPair pair;
      pair.provenance = mtc::Provenance::kGenerated;
      pair.backend = r.backend_id;
      pair.repetition = r.repetition;
      absl::StatusOr<Bindings> run =
          RunSnippet(c, code, targets, refine, cfg.limits);
      if (!run.ok()) {
        ++result.snippets_unusable;
        pair.verdict = mtc::Verdict::kInvalid;
        pair.reason = std::string(run.status().message());
        for (auto& [name, v] : DeclaredInputs(c, code, targets, cfg.limits)) {
          const bool is_source = std::find(m.source_vars.begin(),
                                           m.source_vars.end(),
                                           name) != m.source_vars.end();
          (is_source ? pair.source : pair.followup)[name] = v;
        }
        result.rejected.push_back(std::move(pair));
        continue;
      }
      pair.source = Subset(*run, m.source_vars);
      pair.followup = Subset(*run, m.followup_vars);
      const std::string key = absl::StrCat(mtc::CanonicalText(pair.source),
                                           " | ",
                                           mtc::CanonicalText(pair.followup));
      if (!seen_pairs.insert(key).second && cfg.dedup) {
        ++result.duplicates_removed;
        continue;
      }
      if (ValidatePair(m, pair, c.registry, cfg.limits) ==
          mtc::Verdict::kValid) {
        result.pairs.push_back(std::move(pair));
      } else {
        result.rejected.push_back(std::move(pair));
      }
    }
  }
  return result;
}

CandidateTransformation PrepareCandidate(const Case& c, const Program& block,
                                         const std::string& text, int index,
                                         const PipelineConfig& cfg) {
  const mtc::TransformationSkeleton sk = mtc::DeriveSkeleton(c.model);
  CandidateTransformation cand;
  cand.index = index;
  cand.text = text;
  const FuncDef* fn = block.FindFunction(sk.fn_name);
  if (fn == nullptr) {
    cand.status = CandidateStatus::kUncompilable;
    cand.diagnostics.push_back(
        absl::StrCat("no function '", sk.fn_name, "' in the block"));
    return cand;
  }
  cand.fn = *fn;
  cand.fn.origin = testlang::FuncOrigin::kTransformation;
  std::vector<FuncDef> extras;
  for (const FuncDef& f : block.functions) {
    if (f.name != sk.fn_name) extras.push_back(f);
  }

  Program to_check;
  if (!cfg.ablate_refinement) {
    Program context = c.mtc_program;
    context.tests.clear();
    context.functions.insert(context.functions.end(), extras.begin(),
                             extras.end());
    const analysis::CallContext ctx{&context, &c.registry.program()};
    FuncDef refined = analysis::RefineFunction(cand.fn, ctx);
    int before = 0;
    int after = 0;
    testlang::ForEachStmt(cand.fn.body,
                          [&](const testlang::Stmt&, const testlang::StmtPath&) { ++before; });
    testlang::ForEachStmt(refined.body,
                          [&](const testlang::Stmt&, const testlang::StmtPath&) { ++after; });
    cand.sliced_away = before - after;
    cand.fn = std::move(refined);

    analysis::ResolutionContext rctx;
    rctx.helpers = context.functions;
    rctx.suts = c.registry.signatures();
    absl::StatusOr<analysis::ResolvedFunction> resolved =
        analysis::ResolveDependencies(cand.fn, rctx);
    if (!resolved.ok()) {
      cand.status = CandidateStatus::kUncompilable;
      cand.diagnostics.push_back(std::string(resolved.status().message()));
      return cand;
    }
    cand.linked = resolved->linked;
    to_check = analysis::AsProgram(*resolved);
  } else {
    cand.linked = extras;
    to_check.functions.push_back(cand.fn);
    to_check.functions.insert(to_check.functions.end(), extras.begin(),
                              extras.end());
  }
  const testlang::CheckReport report =
      testlang::CheckProgram(to_check, c.registry.signatures());
  for (const testlang::Diagnostic& d : report.diagnostics) {
    if (d.severity == testlang::Severity::kError) {
      cand.diagnostics.push_back(testlang::FormatDiagnostic(d));
    }
  }
  cand.status = report.ok ? CandidateStatus::kCompilable
                          : CandidateStatus::kUncompilable;
  return cand;
}

absl::StatusOr<std::vector<CandidateTransformation>> Phase2Generate(
    const Case& c, const std::vector<mtc::InputPair>& pairs,
    const generator::Backend& backend, const PipelineConfig& cfg) {
  generator::GenContext ctx = BaseContext(c, cfg);
  ctx.task = generator::Task::kTransformation;
  ctx.skeleton = mtc::DeriveSkeleton(c.model);
  const size_t shown = cfg.ablate_extra_pairs ? std::min<size_t>(1, pairs.size())
                                              : pairs.size();
  for (size_t i = 0; i < shown; ++i) {
    ctx.pairs.push_back(pairs[i]);
    ctx.example_pairs.push_back(PrintPair(c.model, pairs[i]));
  }
  absl::StatusOr<std::vector<generator::RawCandidate>> raw =
      generator::Generate(ctx, cfg.gen, backend);
  if (!raw.ok()) return raw.status();
  std::vector<CandidateTransformation> out;
  for (const generator::RawCandidate& r : *raw) {
    const std::vector<std::string> blocks =
        generator::ExtractCodeBlocks(r.text, ctx.skeleton);
    if (blocks.empty()) continue;
    absl::StatusOr<Program> block = testlang::ParseProgram(
        blocks[0], testlang::FuncOrigin::kTransformation);
    if (!block.ok()) continue;
    CandidateTransformation cand = PrepareCandidate(
        c, *block, blocks[0], static_cast<int>(out.size()), cfg);
    cand.repetition = r.repetition;
    out.push_back(std::move(cand));
  }
  return out;
}

Program ExecutionProgram(const Case& c, const CandidateTransformation& cand) {
  Program p;
  p.functions = c.model.helpers;
  std::set<std::string> names;
  for (const FuncDef& f : p.functions) names.insert(f.name);
  for (const FuncDef& f : cand.linked) {
    if (names.insert(f.name).second) p.functions.push_back(f);
  }
  p.functions.push_back(cand.fn);
  return p;
}

Applicability AssessOne(const Case& c, const CandidateTransformation& cand,
                        const std::vector<Bindings>& pool,
                        const runtime::Limits& limits, int parallelism) {
  Applicability a;
  a.pool_size = static_cast<int>(pool.size());
  a.verdicts.assign(pool.size(), false);
  a.reasons.assign(pool.size(), "");
  if (cand.status != CandidateStatus::kCompilable) {
    for (std::string& r : a.reasons) r = "not compilable";
    return a;
  }
  const Program program = ExecutionProgram(c, cand);
  ParallelFor(static_cast<int>(pool.size()), parallelism, [&](int i) {
    absl::StatusOr<testlang::Block> block =
        mtc::InstantiateWithTransformation(c.model, cand.fn, pool[i]);
    if (!block.ok()) {
      a.reasons[i] = std::string(block.status().message());
      return;
    }
    const runtime::ExecutionOutcome out =
        runtime::Execute(*block, {}, c.registry, limits, &program);
    if (out.status == runtime::ExecStatus::kOk) {
      a.verdicts[i] = true;
    } else {
      a.reasons[i] = StatusText(out);
    }
  });
  for (bool v : a.verdicts) a.applicable += v ? 1 : 0;
  return a;
}

AssessmentReport AssessCandidates(const Case& c,
                                  std::vector<CandidateTransformation> cands,
                                  std::vector<Bindings> pool,
                                  const PipelineConfig& cfg) {
  AssessmentReport report;
  report.pool = std::move(pool);
  for (CandidateTransformation& cand : cands) {
    if (cand.status == CandidateStatus::kCompilable) {
      cand.applicability = AssessOne(c, cand, report.pool, cfg.limits,
                                     cfg.gen.parallelism);
    }
  }
  report.candidates = std::move(cands);

  if (cfg.ablate_assessment) {
    for (const CandidateTransformation& cand : report.candidates) {
      if (cand.status == CandidateStatus::kCompilable) {
        report.chosen = cand.index;
        break;
      }
    }
    return report;
  }
  int best = -1;
  int ties = 0;
  for (const CandidateTransformation& cand : report.candidates) {
    if (!cand.applicability) continue;
    const int count = cand.applicability->applicable;
    if (count > best) {
      best = count;
      ties = 1;
      report.chosen = cand.index;
    } else if (count == best) {
      ++ties;
    }
  }
  report.tie_broken = ties >= 2;
  return report;
}

absl::StatusOr<AdoptResult> RunAdopt(const Case& c,
                                     const generator::Backend& backend,
                                     const PipelineConfig& cfg,
                                     const std::vector<Bindings>* evaluation_pool) {
  using Clock = std::chrono::steady_clock;
  auto ms_since = [](Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  };
  AdoptResult result;
  result.case_name = c.name;

  Clock::time_point t0 = Clock::now();
  absl::StatusOr<Phase1Result> phase1 = Phase1PreparePairs(c, backend, cfg);
  if (!phase1.ok()) return phase1.status();
  result.phase1 = *std::move(phase1);
  result.timings_ms["phase1"] = ms_since(t0);

  t0 = Clock::now();
  absl::StatusOr<std::vector<CandidateTransformation>> cands =
      Phase2Generate(c, result.phase1.pairs, backend, cfg);
  if (!cands.ok()) return cands.status();
  result.timings_ms["phase2_generate"] = ms_since(t0);

  // The hard-coded source first, then every distinct generated source.
  std::vector<Bindings> pool = {result.phase1.pairs[0].source};
  std::set<std::string> in_pool = {mtc::CanonicalText(pool[0])};
  auto add = [&](const Bindings& s) {
    if (in_pool.insert(mtc::CanonicalText(s)).second) pool.push_back(s);
  };
  for (const Bindings& s : result.phase1.sources) add(s);
  for (const mtc::InputPair& p : result.phase1.pairs) add(p.source);

  t0 = Clock::now();
  result.report = AssessCandidates(c, *std::move(cands), std::move(pool), cfg);
  result.timings_ms["assess"] = ms_since(t0);

  if (result.report.chosen) {
    const CandidateTransformation& chosen =
        result.report.candidates[*result.report.chosen];
    Program out;
    out.functions.push_back(chosen.fn);
    out.functions.insert(out.functions.end(), chosen.linked.begin(),
                         chosen.linked.end());
    result.chosen_text = testlang::PrintProgram(out);
    if (evaluation_pool != nullptr) {
      t0 = Clock::now();
      result.evaluation = AssessOne(c, chosen, *evaluation_pool, cfg.limits,
                                    cfg.gen.parallelism);
      result.timings_ms["evaluate"] = ms_since(t0);
    }
  }
  return result;
}

namespace {

const char* VerdictName(mtc::Verdict v) {
  switch (v) {
    case mtc::Verdict::kUnvalidated:
      return "UNVALIDATED";
    case mtc::Verdict::kValid:
      return "VALID";
    case mtc::Verdict::kInvalid:
      return "INVALID";
  }
  return "?";
}

nlohmann::json PairJson(const mtc::InputPair& p) {
  nlohmann::json j = {
      {"source", mtc::CanonicalText(p.source)},
      {"followup", mtc::CanonicalText(p.followup)},
      {"provenance",
       p.provenance == mtc::Provenance::kHardcoded ? "HARDCODED" : "GENERATED"},
      {"verdict", VerdictName(p.verdict)}};
  if (p.provenance == mtc::Provenance::kGenerated) {
    j["repetition"] = p.repetition;
  }
  if (!p.reason.empty()) j["reason"] = p.reason;
  return j;
}

nlohmann::json GeneralizabilityJson(const Applicability& a) {
  return {{"applicable", a.applicable},
          {"pool_size", a.pool_size},
          {"n0", MeetsThreshold(a.applicable, a.pool_size, 0)},
          {"n75", MeetsThreshold(a.applicable, a.pool_size, 75)},
          {"n100", MeetsThreshold(a.applicable, a.pool_size, 100)}};
}

}  // namespace

nlohmann::json AdoptJson(const Case& c, const AdoptResult& r,
                         const PipelineConfig& cfg, bool with_timings) {
  nlohmann::json j;
  j["case"] = c.name;
  j["test"] = c.model.test_name;
  j["config"] = {{"backend", generator::BackendKindName(cfg.gen.backend)},
                 {"seed", cfg.gen.seed},
                 {"k", cfg.gen.k},
                 {"repetitions", cfg.gen.repetitions},
                 {"temperature", cfg.gen.temperature},
                 {"ablation", AblationName(cfg.ablation())},
                 {"dedup", cfg.dedup},
                 {"max_steps", cfg.limits.max_steps}};
  nlohmann::json pairs = nlohmann::json::array();
  for (const mtc::InputPair& p : r.phase1.pairs) pairs.push_back(PairJson(p));
  nlohmann::json rejected = nlohmann::json::array();
  for (const mtc::InputPair& p : r.phase1.rejected) {
    rejected.push_back(PairJson(p));
  }
  j["phase1"] = {{"generated_sources", r.phase1.sources.size()},
                 {"snippets_seen", r.phase1.snippets_seen},
                 {"snippets_unusable", r.phase1.snippets_unusable},
                 {"duplicates_removed", r.phase1.duplicates_removed},
                 {"valid_pairs", pairs},
                 {"rejected_pairs", rejected}};
  nlohmann::json cands = nlohmann::json::array();
  for (const CandidateTransformation& cand : r.report.candidates) {
    nlohmann::json cj = {{"index", cand.index},
                         {"repetition", cand.repetition},
                         {"status", CandidateStatusName(cand.status)},
                         {"sliced_away", cand.sliced_away}};
    if (!cand.diagnostics.empty()) cj["diagnostics"] = cand.diagnostics;
    if (cand.applicability) {
      cj["applicable"] = cand.applicability->applicable;
      cj["pool_size"] = cand.applicability->pool_size;
    }
    cands.push_back(std::move(cj));
  }
  j["candidates"] = std::move(cands);
  j["pool_size"] = r.report.pool.size();
  j["chosen"] = r.report.chosen ? nlohmann::json(*r.report.chosen)
                                : nlohmann::json(nullptr);
  j["tie_broken"] = r.report.tie_broken;
  if (r.report.chosen) {
    const auto& a = r.report.candidates[*r.report.chosen].applicability;
    if (a) j["assessment"] = GeneralizabilityJson(*a);
  }
  if (r.evaluation) j["evaluation"] = GeneralizabilityJson(*r.evaluation);
  if (with_timings) j["timings_ms"] = r.timings_ms;
  return j;
}

}  // namespace mrlift::pipeline
