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

#include "mrlift/cli/cli.h"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/match.h"
#include "mrlift/evaluation/evaluation.h"
#include "mrlift/testlang/parser.h"
#include "mrlift/util/parallel.h"

namespace mrlift::cli {

namespace fs = std::filesystem;
using pipeline::Case;

namespace {

absl::Status BadValue(const std::string& key, const std::string& value) {
  return absl::InvalidArgumentError(
      absl::StrCat("config: bad value '", value, "' for ", key));
}

template <typename T>
absl::Status ParseNumber(const std::string& key, const std::string& value,
                         T* out) {
  if constexpr (std::is_floating_point_v<T>) {
    if (!absl::SimpleAtod(value, out)) return BadValue(key, value);
  } else {
    if (!absl::SimpleAtoi(value, out)) return BadValue(key, value);
  }
  return absl::OkStatus();
}

absl::Status ParseBool(const std::string& key, const std::string& value,
                       bool* out) {
  if (!absl::SimpleAtob(value, out)) return BadValue(key, value);
  return absl::OkStatus();
}

using Setter = absl::Status (*)(CliConfig&, const std::string&,
                                const std::string&);

const std::map<std::string, Setter>& Setters() {
  static const auto* setters = new std::map<std::string, Setter>{
      {"corpus",
       [](CliConfig& c, const std::string&, const std::string& v) {
         c.corpus_dir = v;
         return absl::OkStatus();
       }},
      {"out",
       [](CliConfig& c, const std::string&, const std::string& v) {
         c.out_dir = v;
         return absl::OkStatus();
       }},
      {"backend",
       [](CliConfig& c, const std::string&, const std::string& v) {
         absl::StatusOr<generator::BackendKind> kind =
             generator::ParseBackendKind(v);
         if (!kind.ok()) return kind.status();
         c.pipeline.gen.backend = *kind;
         return absl::OkStatus();
       }},
      {"seed",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         return ParseNumber(k, v, &c.pipeline.gen.seed);
       }},
      {"parallelism",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         absl::Status s = ParseNumber(k, v, &c.pipeline.gen.parallelism);
         if (s.ok() && c.pipeline.gen.parallelism < 1) return BadValue(k, v);
         return s;
       }},
      {"ablate",
       [](CliConfig& c, const std::string&, const std::string& v) {
         absl::StatusOr<pipeline::Ablation> a = pipeline::ParseAblation(v);
         if (!a.ok()) return a.status();
         c.pipeline.SetAblation(*a);
         return absl::OkStatus();
       }},
      {"k",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         return ParseNumber(k, v, &c.pipeline.gen.k);
       }},
      {"repetitions",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         return ParseNumber(k, v, &c.pipeline.gen.repetitions);
       }},
      {"temperature",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         return ParseNumber(k, v, &c.pipeline.gen.temperature);
       }},
      {"max_steps",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         absl::Status s = ParseNumber(k, v, &c.pipeline.limits.max_steps);
         if (s.ok() && c.pipeline.limits.max_steps < 1) return BadValue(k, v);
         return s;
       }},
      {"dedup",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         return ParseBool(k, v, &c.pipeline.dedup);
       }},
      {"synth_profile",
       [](CliConfig& c, const std::string&, const std::string& v) {
         absl::StatusOr<generator::SynthProfile> p =
             generator::ParseSynthProfile(v);
         if (!p.ok()) return p.status();
         c.pipeline.gen.profile = *p;
         return absl::OkStatus();
       }},
      {"pool_k",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         return ParseNumber(k, v, &c.pool_k);
       }},
      {"pool_repetitions",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         return ParseNumber(k, v, &c.pool_repetitions);
       }},
      {"http_endpoint",
       [](CliConfig& c, const std::string&, const std::string& v) {
         c.pipeline.gen.http.endpoint_url = v;
         return absl::OkStatus();
       }},
      {"http_model",
       [](CliConfig& c, const std::string&, const std::string& v) {
         c.pipeline.gen.http.model = v;
         return absl::OkStatus();
       }},
      {"http_token_env",
       [](CliConfig& c, const std::string&, const std::string& v) {
         c.pipeline.gen.http.auth_token_env = v;
         return absl::OkStatus();
       }},
      {"http_timeout",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         return ParseNumber(k, v, &c.pipeline.gen.http.timeout_seconds);
       }},
      {"http_retries",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         return ParseNumber(k, v, &c.pipeline.gen.http.max_retries);
       }},
  };
  return *setters;
}

absl::StatusOr<std::string> Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::Status WriteText(const fs::path& path, const std::string& text) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) {
    return absl::UnavailableError(absl::StrCat("cannot write ", path.string()));
  }
  return absl::OkStatus();
}

int ExitFor(const absl::Status& s) {
  if (s.ok()) return kExitOk;
  switch (s.code()) {
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kUnavailable:
    case absl::StatusCode::kDeadlineExceeded:
    case absl::StatusCode::kPermissionDenied:
    case absl::StatusCode::kUnauthenticated:
    case absl::StatusCode::kResourceExhausted:
      return kExitEnvironment;
    default:
      return absl::StartsWith(s.message(), "backend:") ? kExitEnvironment
                                                 : kExitFailure;
  }
}

// Checks a single .mtl file: `#[sut]` functions form the registry, the rest
// is checked against it and every metamorphic test is extracted.
int CheckFile(const std::string& path, std::ostream& out, std::ostream& err) {
  absl::StatusOr<std::string> text = Slurp(path);
  if (!text.ok()) {
    err << path << ": " << text.status().message() << "\n";
    return kExitEnvironment;
  }
  absl::StatusOr<testlang::Program> program =
      testlang::ParseProgram(*text, testlang::FuncOrigin::kHelper);
  if (!program.ok()) {
    err << path << ": " << program.status().message() << "\n";
    return kExitFailure;
  }
  testlang::Program sut;
  testlang::Program rest;
  rest.tests = program->tests;
  for (const testlang::FuncDef& f : program->functions) {
    (f.origin == testlang::FuncOrigin::kSut ? sut : rest)
        .functions.push_back(f);
  }
  int rc = kExitOk;
  auto report = [&](const testlang::CheckReport& r) {
    for (const testlang::Diagnostic& d : r.diagnostics) {
      err << path << ":" << testlang::FormatDiagnostic(d) << "\n";
    }
    if (!r.ok) rc = kExitFailure;
  };
  report(testlang::CheckProgram(sut, {}));
  if (rc != kExitOk) return rc;
  runtime::SutRegistry registry(sut);
  report(testlang::CheckProgram(rest, registry.signatures()));
  if (rc != kExitOk) return rc;
  const std::vector<std::string> tests = mtc::AnnotatedTests(rest);
  for (const std::string& t : tests) {
    absl::StatusOr<mtc::MtcModel> m = mtc::ExtractMtc(rest, t, registry);
    if (!m.ok()) {
      err << path << ": test " << t << ": " << m.status().message() << "\n";
      rc = kExitFailure;
    }
  }
  if (rc == kExitOk) {
    out << "ok " << path << ": " << sut.functions.size() << " sut, "
        << rest.functions.size() << " helper function(s), "
        << rest.tests.size() << " test(s), " << tests.size()
        << " metamorphic\n";
  }
  return rc;
}

int CheckCaseDir(const std::string& dir, std::ostream& out, std::ostream& err) {
  absl::StatusOr<Case> c = pipeline::LoadCase(dir);
  if (!c.ok()) {
    err << dir << ": " << c.status().message() << "\n";
    return ExitFor(c.status());
  }
  out << "ok " << c->name << ": test " << c->model.test_name << ", "
      << c->model.source_vars.size() << " source, "
      << c->model.followup_vars.size() << " follow-up, "
      << c->model.relation_asserts.size() << " relation assert(s)"
      << (c->ground_truth ? ", ground truth" : "") << "\n";
  return kExitOk;
}

absl::StatusOr<std::vector<std::string>> ResolveCases(
    const CliConfig& cfg, const std::vector<std::string>& names, bool all) {
  std::vector<std::string> dirs;
  if (all) {
    if (!fs::is_directory(cfg.corpus_dir)) {
      return absl::NotFoundError(
          absl::StrCat("corpus directory ", cfg.corpus_dir, " not found"));
    }
    dirs = pipeline::DiscoverCases(cfg.corpus_dir);
  }
  for (const std::string& n : names) {
    if (fs::exists(fs::path(n) / "mtc.mtl")) {
      dirs.push_back(n);
    } else if (fs::exists(fs::path(cfg.corpus_dir) / n / "mtc.mtl")) {
      dirs.push_back((fs::path(cfg.corpus_dir) / n).string());
    } else {
      return absl::NotFoundError(absl::StrCat("no case '", n, "'"));
    }
  }
  return dirs;
}

absl::StatusOr<std::unique_ptr<generator::Backend>> CaseBackend(
    const CliConfig& cfg, const std::string& dir, const char* sub) {
  generator::GenConfig gen = cfg.pipeline.gen;
  gen.fixture_root = (fs::path(dir) / sub).string();
  return generator::MakeBackend(gen);
}

pipeline::PipelineConfig PoolConfig(const CliConfig& cfg, int parallelism) {
  pipeline::PipelineConfig pc = cfg.pipeline;
  pc.gen.k = cfg.pool_k;
  pc.gen.repetitions = cfg.pool_repetitions;
  pc.gen.parallelism = parallelism;
  return pc;
}

// The evaluation pool. REPLAY without recorded pool fixtures has none.
absl::StatusOr<std::optional<evaluation::SourcePool>> EvaluationPool(
    const CliConfig& cfg, const Case& c, int parallelism) {
  if (cfg.pipeline.gen.backend == generator::BackendKind::kReplay &&
      !fs::is_directory(fs::path(c.dir) / "pool_fixtures")) {
    return std::optional<evaluation::SourcePool>();
  }
  absl::StatusOr<std::unique_ptr<generator::Backend>> backend =
      CaseBackend(cfg, c.dir, "pool_fixtures");
  if (!backend.ok()) return backend.status();
  absl::StatusOr<evaluation::SourcePool> pool = evaluation::PrepareSourcePool(
      c, **backend, PoolConfig(cfg, parallelism));
  if (!pool.ok()) return pool.status();
  return std::optional<evaluation::SourcePool>(*std::move(pool));
}

nlohmann::json PoolJson(const evaluation::SourcePool& p) {
  return {{"size", p.inputs.size()},
          {"raw", p.raw_count},
          {"dedup_removed", p.dedup_removed},
          {"invalid_removed", p.invalid_removed},
          {"validity_filtered", p.validity_filtered}};
}

struct CaseRun {
  std::string dir;
  absl::Status status;
  std::optional<Case> c;
  std::optional<pipeline::AdoptResult> adopt;
  std::optional<evaluation::SourcePool> pool;
  nlohmann::json report;
  std::vector<std::string> warnings;

  // Pool the chosen transformation is judged on.
  const std::vector<runtime::Bindings>& JudgingPool() const {
    return pool ? pool->inputs : adopt->report.pool;
  }
  const pipeline::CandidateTransformation* Chosen() const {
    if (!adopt || !adopt->report.chosen) return nullptr;
    return &adopt->report.candidates[*adopt->report.chosen];
  }
};

nlohmann::json Generalizability(const CaseRun& run) {
  const pipeline::Applicability* a = nullptr;
  if (run.adopt->evaluation) {
    a = &*run.adopt->evaluation;
  } else if (const auto* chosen = run.Chosen();
             chosen != nullptr && chosen->applicability) {
    a = &*chosen->applicability;
  }
  if (a == nullptr) return nullptr;
  nlohmann::json j = {{"pool", run.adopt->evaluation ? "evaluation" : "assessment"},
                      {"applicable", a->applicable},
                      {"pool_size", a->pool_size}};
  for (const auto& [n, ok] : evaluation::MetricGeneralizable(*a)) {
    j[absl::StrCat("n", n)] = ok;
  }
  return j;
}

CaseRun AdoptCase(const CliConfig& cfg, const std::string& dir,
                  int parallelism) {
  CaseRun run;
  run.dir = dir;
  absl::StatusOr<Case> c = pipeline::LoadCase(dir);
  if (!c.ok()) {
    run.status = c.status();
    return run;
  }
  run.c = *std::move(c);
  absl::StatusOr<std::optional<evaluation::SourcePool>> pool =
      EvaluationPool(cfg, *run.c, parallelism);
  if (!pool.ok()) {
    run.status = pool.status();
    return run;
  }
  run.pool = *std::move(pool);
  if (run.pool) {
    for (const std::string& w : run.pool->warnings) run.warnings.push_back(w);
  }
  absl::StatusOr<std::unique_ptr<generator::Backend>> backend =
      CaseBackend(cfg, dir, "fixtures");
  if (!backend.ok()) {
    run.status = backend.status();
    return run;
  }
  pipeline::PipelineConfig pc = cfg.pipeline;
  pc.gen.parallelism = parallelism;
  absl::StatusOr<pipeline::AdoptResult> adopt = pipeline::RunAdopt(
      *run.c, **backend, pc, run.pool ? &run.pool->inputs : nullptr);
  if (!adopt.ok()) {
    run.status = adopt.status();
    return run;
  }
  run.adopt = *std::move(adopt);
  run.report = pipeline::AdoptJson(*run.c, *run.adopt, cfg.pipeline,
                                   cfg.timings);
  if (run.pool) run.report["evaluation_pool"] = PoolJson(*run.pool);
  run.report["generalizability"] = Generalizability(run);
  return run;
}

std::vector<CaseRun> AdoptAll(const CliConfig& cfg,
                              const std::vector<std::string>& dirs) {
  std::vector<CaseRun> runs(dirs.size());
  const int p = cfg.pipeline.gen.parallelism;
  const int inner = dirs.size() > 1 ? 1 : p;
  ParallelFor(static_cast<int>(dirs.size()), dirs.size() > 1 ? p : 1,
              [&](int i) { runs[i] = AdoptCase(cfg, dirs[i], inner); });
  return runs;
}

std::string Dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

bool Meets100(const CaseRun& run) {
  const nlohmann::json& g = run.report["generalizability"];
  return g.is_object() && g.value("n100", false);
}

}  // namespace

absl::Status ApplyConfigEntry(CliConfig& cfg, const std::string& key,
                              const std::string& value) {
  auto it = Setters().find(key);
  if (it == Setters().end()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "config: unknown key '", key, "' (known: ",
        absl::StrJoin(ConfigKeys(), ", "), ")"));
  }
  return it->second(cfg, key, value);
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const auto& [k, v] : Setters()) keys.push_back(k);
  return keys;
}

absl::Status LoadConfigFile(const std::string& path, CliConfig& cfg) {
  absl::StatusOr<std::string> text = Slurp(path);
  if (!text.ok()) return text.status();
  std::istringstream in(*text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (size_t hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    const std::string trimmed(absl::StripAsciiWhitespace(line));
    if (trimmed.empty()) continue;
    const size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ":", lineno, ": expected key = value"));
    }
    const std::string key(absl::StripAsciiWhitespace(trimmed.substr(0, eq)));
    const std::string value(absl::StripAsciiWhitespace(trimmed.substr(eq + 1)));
    if (absl::Status s = ApplyConfigEntry(cfg, key, value); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ":", lineno, ": ", std::string(s.message())));
    }
  }
  return absl::OkStatus();
}

int CmdCheck(const std::vector<std::string>& paths, std::ostream& out,
             std::ostream& err) {
  int rc = kExitOk;
  for (const std::string& p : paths) {
    int r = kExitOk;
    if (!fs::exists(p)) {
      err << p << ": no such file or directory\n";
      r = kExitEnvironment;
    } else if (fs::is_directory(p) && fs::exists(fs::path(p) / "mtc.mtl")) {
      r = CheckCaseDir(p, out, err);
    } else if (fs::is_directory(p)) {
      const std::vector<std::string> cases = pipeline::DiscoverCases(p);
      if (cases.empty()) {
        err << p << ": no cases\n";
        r = kExitFailure;
      }
      for (const std::string& c : cases) {
        r = std::max(r, CheckCaseDir(c, out, err));
      }
    } else {
      r = CheckFile(p, out, err);
    }
    rc = std::max(rc, r);
  }
  return rc;
}

int CmdAdopt(const CliConfig& cfg, const std::vector<std::string>& cases,
             bool all, std::ostream& out, std::ostream& err) {
  absl::StatusOr<std::vector<std::string>> dirs =
      ResolveCases(cfg, cases, all);
  if (!dirs.ok()) {
    err << dirs.status().message() << "\n";
    return kExitEnvironment;
  }
  if (dirs->empty()) {
    err << "adopt: no cases\n";
    return kExitFailure;
  }
  std::vector<CaseRun> runs = AdoptAll(cfg, *dirs);
  int rc = kExitOk;
  int chosen = 0;
  int n100 = 0;
  nlohmann::json summary = nlohmann::json::array();
  for (const CaseRun& run : runs) {
    if (!run.status.ok()) {
      err << run.dir << ": " << run.status.message() << "\n";
      rc = std::max(rc, ExitFor(run.status));
      continue;
    }
    for (const std::string& w : run.warnings) err << "warning: " << w << "\n";
    const fs::path dir = fs::path(cfg.out_dir) / run.c->name;
    if (absl::Status s = WriteText(dir / "adopt.json", Dump(run.report));
        !s.ok()) {
      err << s.message() << "\n";
      return kExitEnvironment;
    }
    std::error_code ec;
    fs::remove(dir / "transform.mtl", ec);
    const pipeline::CandidateTransformation* c = run.Chosen();
    if (c == nullptr) {
      out << run.c->name << ": no compilable candidate\n";
      rc = std::max(rc, kExitFailure);
    } else {
      ++chosen;
      if (absl::Status s =
              WriteText(dir / "transform.mtl", run.adopt->chosen_text);
          !s.ok()) {
        err << s.message() << "\n";
        return kExitEnvironment;
      }
      const nlohmann::json& g = run.report["generalizability"];
      const bool full = Meets100(run);
      n100 += full ? 1 : 0;
      out << run.c->name << ": chosen #" << c->index << ", applicable "
          << g["applicable"].get<int>() << "/" << g["pool_size"].get<int>()
          << " (" << g["pool"].get<std::string>() << " pool)"
          << (full ? ", 100% generalizable" : "") << "\n";
    }
    summary.push_back({{"case", run.c->name},
                       {"chosen", run.report["chosen"]},
                       {"generalizability", run.report["generalizability"]}});
  }
  if (all) {
    nlohmann::json j = {{"ablation", pipeline::AblationName(cfg.pipeline.ablation())},
                        {"cases", summary},
                        {"total", runs.size()},
                        {"chosen", chosen},
                        {"generalizable_100", n100}};
    if (absl::Status s =
            WriteText(fs::path(cfg.out_dir) / "adopt_summary.json", Dump(j));
        !s.ok()) {
      err << s.message() << "\n";
      return kExitEnvironment;
    }
  }
  out << "adopt: " << chosen << "/" << runs.size() << " chosen, " << n100
      << " 100% generalizable\n";
  return rc;
}

int CmdEval(const CliConfig& cfg, const std::vector<std::string>& cases,
            bool all, std::ostream& out, std::ostream& err) {
  absl::StatusOr<std::vector<std::string>> dirs =
      ResolveCases(cfg, cases, all);
  if (!dirs.ok()) {
    err << dirs.status().message() << "\n";
    return kExitEnvironment;
  }
  if (dirs->empty()) {
    err << "eval: no cases\n";
    return kExitFailure;
  }
  std::vector<CaseRun> runs = AdoptAll(cfg, *dirs);
  const runtime::Limits& limits = cfg.pipeline.limits;

  struct Eval {
    absl::Status status;
    nlohmann::json report;
    std::optional<evaluation::AdequacyComparison> adequacy;
  };
  std::vector<Eval> evals(runs.size());
  const int p = cfg.pipeline.gen.parallelism;
  ParallelFor(static_cast<int>(runs.size()), runs.size() > 1 ? p : 1, [&](int i) {
    const CaseRun& run = runs[i];
    Eval& e = evals[i];
    if (!run.status.ok()) {
      e.status = run.status;
      return;
    }
    const Case& c = *run.c;
    const int inner = runs.size() > 1 ? 1 : p;
    const std::vector<runtime::Bindings>& pool = run.JudgingPool();
    int compilable = 0;
    for (const auto& cand : run.adopt->report.candidates) {
      compilable += cand.status == pipeline::CandidateStatus::kCompilable;
    }
    e.report["case"] = c.name;
    e.report["candidates"] = run.adopt->report.candidates.size();
    e.report["compilable"] = compilable;
    e.report["chosen"] = run.report["chosen"];
    e.report["generalizability"] = run.report["generalizability"];
    if (run.pool) e.report["evaluation_pool"] = PoolJson(*run.pool);
    if (!run.warnings.empty()) e.report["warnings"] = run.warnings;

    nlohmann::json followups;
    if (const auto* chosen = run.Chosen()) {
      const evaluation::FollowupValidity v =
          evaluation::MetricValidFollowups(c, *chosen, pool, limits);
      followups["chosen"] = {{"valid", v.valid}, {"total", v.total}};
    }
    if (c.ground_truth) {
      absl::StatusOr<pipeline::CandidateTransformation> gt =
          evaluation::GroundTruthCandidate(c);
      if (gt.ok()) {
        const evaluation::FollowupValidity v =
            evaluation::MetricValidFollowups(c, *gt, pool, limits);
        followups["ground_truth"] = {{"valid", v.valid}, {"total", v.total}};
      }
    }
    e.report["valid_followups"] = followups;

    std::vector<evaluation::Mutant> mutants = evaluation::MutateSut(c.registry);
    absl::StatusOr<std::vector<evaluation::Mutant>> seeded =
        evaluation::LoadSeededMutants(c, static_cast<int>(mutants.size()));
    if (!seeded.ok()) {
      e.status = seeded.status();
      return;
    }
    mutants.insert(mutants.end(), seeded->begin(), seeded->end());
    absl::StatusOr<std::vector<evaluation::Suite>> suites =
        evaluation::BuildSuites(c, run.Chosen(), pool, limits);
    if (!suites.ok()) {
      e.status = suites.status();
      return;
    }
    nlohmann::json sizes = nlohmann::json::object();
    for (const evaluation::Suite& s : *suites) sizes[s.name] = s.tests.size();
    e.report["suites"] = sizes;
    absl::StatusOr<evaluation::AdequacyComparison> adequacy =
        evaluation::RunMutationTesting(c.registry, *suites, mutants,
                                       evaluation::StandardCombos(), limits,
                                       inner);
    if (!adequacy.ok()) {
      e.status = adequacy.status();
      return;
    }
    e.report["adequacy"] = evaluation::AdequacyJson(*adequacy, mutants);
    e.adequacy = *std::move(adequacy);
  });

  int rc = kExitOk;
  evaluation::AdequacyTotals totals;
  nlohmann::json cases_json = nlohmann::json::array();
  int n0 = 0, n75 = 0, n100 = 0, compilable_cases = 0;
  for (size_t i = 0; i < runs.size(); ++i) {
    const Eval& e = evals[i];
    if (!e.status.ok()) {
      err << runs[i].dir << ": " << e.status.message() << "\n";
      rc = std::max(rc, ExitFor(e.status));
      continue;
    }
    for (const std::string& w : runs[i].warnings) {
      err << "warning: " << w << "\n";
    }
    if (runs[i].Chosen() == nullptr) rc = std::max(rc, kExitFailure);
    const std::string name = runs[i].c->name;
    if (absl::Status s = WriteText(fs::path(cfg.out_dir) / name / "eval.json",
                                   Dump(e.report));
        !s.ok()) {
      err << s.message() << "\n";
      return kExitEnvironment;
    }
    totals.Add(*e.adequacy);
    const nlohmann::json& g = e.report["generalizability"];
    if (g.is_object()) {
      n0 += g.value("n0", false);
      n75 += g.value("n75", false);
      n100 += g.value("n100", false);
    }
    compilable_cases += e.report["compilable"].get<int>() > 0;
    cases_json.push_back(
        {{"case", name},
         {"generalizability", g},
         {"D", e.adequacy->mutation_score.at("D")},
         {"D+M", e.adequacy->mutation_score.at("D+M")}});
    out << name << ": score D " << e.adequacy->mutation_score.at("D")
        << " -> D+M " << e.adequacy->mutation_score.at("D+M") << ", coverage D "
        << e.adequacy->line_coverage.at("D") << " -> D+M "
        << e.adequacy->line_coverage.at("D+M") << "\n";
  }
  const std::vector<std::string> combo_order = {"D",  "D+M",   "D+L",
                                                "D+L+M", "MR", "non-MR"};
  nlohmann::json combos = nlohmann::json::object();
  for (const std::string& c : combo_order) {
    combos[c] = {{"line_coverage", totals.Coverage(c)},
                 {"mutation_score", totals.Score(c)}};
  }
  nlohmann::json summary = {
      {"cases", cases_json},
      {"total", runs.size()},
      {"compilable_cases", compilable_cases},
      {"generalizable", {{"n0", n0}, {"n75", n75}, {"n100", n100}}},
      {"sut_statements", totals.statements},
      {"scored_mutants", totals.scored_mutants},
      {"combos", combos}};
  if (absl::Status s =
          WriteText(fs::path(cfg.out_dir) / "eval_summary.json", Dump(summary));
      !s.ok()) {
    err << s.message() << "\n";
    return kExitEnvironment;
  }
  if (absl::Status s = WriteText(fs::path(cfg.out_dir) / "adequacy.csv",
                                 evaluation::AdequacyCsv(totals, combo_order));
      !s.ok()) {
    err << s.message() << "\n";
    return kExitEnvironment;
  }
  out << "eval: mutation score D " << totals.Score("D") << " -> D+M "
      << totals.Score("D+M") << "; line coverage D " << totals.Coverage("D")
      << " -> D+M " << totals.Coverage("D+M") << "\n";
  return rc;
}

int CmdRecord(const CliConfig& cfg, const std::vector<std::string>& cases,
              bool all, std::ostream& out, std::ostream& err) {
  if (!cfg.reseal &&
      cfg.pipeline.gen.backend == generator::BackendKind::kReplay) {
    err << "record: needs --backend http or synth (or --reseal)\n";
    return kExitEnvironment;
  }
  absl::StatusOr<std::vector<std::string>> dirs =
      ResolveCases(cfg, cases, all);
  if (!dirs.ok()) {
    err << dirs.status().message() << "\n";
    return kExitEnvironment;
  }
  if (dirs->empty()) {
    err << "record: no cases\n";
    return kExitFailure;
  }
  int rc = kExitOk;
  for (const std::string& dir : *dirs) {
    absl::StatusOr<Case> c = pipeline::LoadCase(dir);
    if (!c.ok()) {
      err << dir << ": " << c.status().message() << "\n";
      rc = std::max(rc, ExitFor(c.status()));
      continue;
    }
    const fs::path root = fs::path(dir) / "fixtures";
    const fs::path pool_root = fs::path(dir) / "pool_fixtures";
    if (!cfg.reseal && !cfg.force &&
        (fs::exists(root) || fs::exists(pool_root))) {
      err << c->name << ": fixtures exist; pass --force to overwrite\n";
      rc = std::max(rc, kExitFailure);
      continue;
    }

    // Any failure below leaves the existing fixtures untouched.
    auto inner_for = [&](const fs::path& r)
        -> absl::StatusOr<std::unique_ptr<generator::Backend>> {
      if (cfg.reseal) return generator::MakeReplayBackend(r.string(), false);
      return generator::MakeBackend(cfg.pipeline.gen);
    };
    absl::StatusOr<std::unique_ptr<generator::Backend>> inner = inner_for(root);
    if (!inner.ok()) {
      err << c->name << ": " << inner.status().message() << "\n";
      return kExitEnvironment;
    }
    generator::RecordingBackend recorder(**inner);
    absl::Status status;
    for (pipeline::Ablation a : {pipeline::Ablation::kNone,
                                 pipeline::Ablation::kV1,
                                 pipeline::Ablation::kV2}) {
      pipeline::PipelineConfig pc = cfg.pipeline;
      pc.SetAblation(a);
      absl::StatusOr<pipeline::AdoptResult> r =
          pipeline::RunAdopt(*c, recorder, pc);
      if (!r.ok()) {
        status = r.status();
        break;
      }
    }

    std::optional<generator::RecordingBackend> pool_recorder;
    absl::StatusOr<std::unique_ptr<generator::Backend>> pool_inner =
        inner_for(pool_root);
    const bool want_pool = !cfg.reseal || fs::is_directory(pool_root);
    if (status.ok() && want_pool) {
      if (!pool_inner.ok()) {
        status = pool_inner.status();
      } else {
        pool_recorder.emplace(**pool_inner);
        absl::StatusOr<evaluation::SourcePool> pool =
            evaluation::PrepareSourcePool(
                *c, *pool_recorder, PoolConfig(cfg, cfg.pipeline.gen.parallelism));
        if (!pool.ok()) status = pool.status();
      }
    }
    if (!status.ok()) {
      err << c->name << ": " << status.message() << "\n";
      rc = std::max(rc, kExitEnvironment);
      continue;
    }
    std::error_code ec;
    if (!cfg.reseal) {
      fs::remove_all(root, ec);
      fs::remove_all(pool_root, ec);
    }
    status = recorder.Write(root.string(), /*overwrite=*/true);
    if (status.ok() && pool_recorder) {
      status = pool_recorder->Write(pool_root.string(), /*overwrite=*/true);
    }
    if (!status.ok()) {
      err << c->name << ": " << status.message() << "\n";
      rc = std::max(rc, ExitFor(status));
      continue;
    }
    out << (cfg.reseal ? "resealed " : "recorded ") << c->name << "\n";
  }
  return rc;
}

int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"mrlift: turn metamorphic test cases into reusable input "
               "transformations"};
  app.require_subcommand(1);
  std::string config_path;
  std::map<std::string, std::string> overrides;
  const std::vector<std::pair<std::string, std::string>> flag_keys = {
      {"--seed", "seed"},       {"--backend", "backend"},
      {"--out", "out"},         {"--parallelism", "parallelism"},
      {"--ablate", "ablate"},   {"--corpus", "corpus"},
      {"--k", "k"},             {"--repetitions", "repetitions"},
      {"--temperature", "temperature"}, {"--max-steps", "max_steps"}};
  app.add_option("--config", config_path, "flat key = value config file");
  for (const auto& [flag, key] : flag_keys) {
    app.add_option_function<std::string>(
        flag, [&overrides, key = key](const std::string& v) { overrides[key] = v; },
        absl::StrCat("overrides config key '", key, "'"));
  }
  bool all = false;
  bool force = false;
  bool reseal = false;
  bool timings = false;
  app.add_flag("--all", all, "every case of the corpus");
  app.add_flag("--force", force, "record: overwrite existing fixtures");
  app.add_flag("--reseal", reseal,
               "record: re-digest existing fixtures after hand edits");
  app.add_flag("--timings", timings, "adopt/eval: add wall-clock timings");

  std::vector<std::string> paths;
  std::vector<std::string> cases;
  CLI::App* check = app.add_subcommand("check", "check .mtl files or cases");
  check->add_option("paths", paths)->required();
  CLI::App* adopt = app.add_subcommand("adopt", "infer transformations");
  CLI::App* eval = app.add_subcommand("eval", "metrics and mutation analysis");
  CLI::App* record = app.add_subcommand("record", "write REPLAY fixtures");
  for (CLI::App* sub : {adopt, eval, record}) {
    sub->add_option("cases", cases, "case names or directories");
  }
  for (CLI::App* sub : {check, adopt, eval, record}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitEnvironment;
  }

  CliConfig cfg;
  if (!config_path.empty()) {
    if (absl::Status s = LoadConfigFile(config_path, cfg); !s.ok()) {
      err << s.message() << "\n";
      return kExitEnvironment;
    }
  }
  for (const auto& [key, value] : overrides) {
    if (absl::Status s = ApplyConfigEntry(cfg, key, value); !s.ok()) {
      err << s.message() << "\n";
      return kExitEnvironment;
    }
  }
  if (absl::Status s = generator::ValidateGenConfig(cfg.pipeline.gen);
      !s.ok()) {
    err << "config: " << s.message() << "\n";
    return kExitEnvironment;
  }
  if (cfg.pipeline.gen.backend == generator::BackendKind::kHttp) {
    generator::GenConfig probe = cfg.pipeline.gen;
    if (absl::StatusOr<std::unique_ptr<generator::Backend>> b =
            generator::MakeBackend(probe);
        !b.ok()) {
      err << b.status().message() << "\n";
      return kExitEnvironment;
    }
  }
  cfg.timings = timings;
  cfg.force = force;
  cfg.reseal = reseal;

  if (check->parsed()) return CmdCheck(paths, out, err);
  if ((adopt->parsed() || eval->parsed() || record->parsed()) && !all &&
      cases.empty()) {
    err << "name a case or pass --all\n";
    return kExitEnvironment;
  }
  if (adopt->parsed()) return CmdAdopt(cfg, cases, all, out, err);
  if (eval->parsed()) return CmdEval(cfg, cases, all, out, err);
  return CmdRecord(cfg, cases, all, out, err);
}

}  // namespace mrlift::cli
