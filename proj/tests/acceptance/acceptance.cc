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

// Acceptance checks. Prints one PASS/FAIL line per criterion; exits non-zero
// if any selected criterion fails. `--criterion N` runs just one.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "json.hpp"
#include "mrlift/analysis/def_use.h"
#include "mrlift/analysis/slicer.h"
#include "mrlift/cli/cli.h"
#include "mrlift/generator/generator.h"
#include "mrlift/pipeline/pipeline.h"
#include "mrlift/runtime/interpreter.h"
#include "mrlift/testlang/parser.h"
#include "mrlift/testlang/printer.h"

namespace mrlift::acceptance {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using pipeline::CandidateStatus;
using pipeline::CandidateTransformation;
using runtime::Bindings;
using runtime::ExecStatus;

struct Result {
  bool pass = false;
  std::string detail;
};

double SecondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path ScratchDir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mrlift_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int Cli(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "mrlift");
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int rc = cli::RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text != nullptr) *err_text = err.str();
  return rc;
}

// Every file under `root`, relative path -> bytes.
std::map<std::string, std::string> Snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      files[fs::relative(e.path(), root).string()] = ReadFile(e.path());
    }
  }
  return files;
}

absl::StatusOr<pipeline::Case> Load(const std::string& dir) {
  return pipeline::LoadCase(dir);
}

CandidateTransformation Candidate(const pipeline::Case& c,
                                  const std::string& text, int index) {
  absl::StatusOr<testlang::Program> block =
      testlang::ParseProgram(text, testlang::FuncOrigin::kTransformation);
  if (!block.ok()) {
    CandidateTransformation bad;
    bad.index = index;
    bad.status = CandidateStatus::kUncompilable;
    return bad;
  }
  return pipeline::PrepareCandidate(c, *block, text, index, {});
}

// ---- 1: parse -> print -> parse ----

Result ParserRoundTrip() {
  const Clock::time_point t0 = Clock::now();
  std::vector<fs::path> files;
  for (const char* root : {MRLIFT_CORPUS_DIR, MRLIFT_FIXTURE_DIR, MRLIFT_DOCS_DIR}) {
    if (!fs::exists(root)) continue;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
      if (e.is_regular_file() && e.path().extension() == ".mtl") {
        files.push_back(e.path());
      }
    }
  }
  std::sort(files.begin(), files.end());
  auto round_trip = [](const std::string& text, std::string* why) {
    absl::StatusOr<testlang::Program> a = testlang::ParseProgram(text);
    if (!a.ok()) {
      *why = std::string(a.status().message());
      return false;
    }
    const std::string printed = testlang::PrintProgram(*a);
    absl::StatusOr<testlang::Program> b = testlang::ParseProgram(printed);
    if (!b.ok()) {
      *why = absl::StrCat("reparse: ", std::string(b.status().message()));
      return false;
    }
    if (!(*a == *b)) {
      *why = "ASTs differ";
      return false;
    }
    return true;
  };
  std::string why;
  for (const fs::path& f : files) {
    if (!round_trip(ReadFile(f), &why)) {
      return {false, absl::StrCat(f.string(), ": ", why)};
    }
  }
  constexpr int kRandom = 1000;
  for (int seed = 0; seed < kRandom; ++seed) {
    const std::string text =
        testlang::PrintProgram(generator::RandomProgram(static_cast<uint64_t>(seed)));
    if (!round_trip(text, &why)) {
      return {false, absl::StrCat("random program ", seed, ": ", why)};
    }
  }
  const double secs = SecondsSince(t0);
  return {secs < 10.0 && files.size() >= 20,
          absl::StrCat(files.size(), " bundled files + ", kRandom,
                       " generated programs, exact, ", secs, " s")};
}

// ---- 2: slice against brute force ----

struct GenStmt {
  std::string text;
  std::set<std::string> defs;
  std::set<std::string> uses;
  // For assignments: the variable, whose `let` must stay.
  std::string declares;
};

constexpr char kState[] = "<state>";

std::string RandomExpr(std::mt19937_64& rng, const std::vector<std::string>& vars,
                       int depth, std::set<std::string>& uses) {
  std::uniform_int_distribution<int> pick(0, 9);
  if (depth == 0 || pick(rng) < 4) {
    if (!vars.empty() && pick(rng) < 6) {
      const std::string& v = vars[std::uniform_int_distribution<size_t>(
          0, vars.size() - 1)(rng)];
      uses.insert(v);
      return v;
    }
    return std::to_string(pick(rng));
  }
  static const char* kOps[] = {"+", "-", "*"};
  const std::string lhs = RandomExpr(rng, vars, depth - 1, uses);
  const std::string rhs = RandomExpr(rng, vars, depth - 1, uses);
  return absl::StrCat("(", lhs, " ", kOps[pick(rng) % 3], " ", rhs, ")");
}

std::vector<GenStmt> RandomStraightLine(std::mt19937_64& rng) {
  std::vector<GenStmt> out;
  std::vector<std::string> vars;
  const int n = std::uniform_int_distribution<int>(1, 8)(rng);
  int fresh = 0;
  for (int i = 0; i < n; ++i) {
    GenStmt s;
    const int roll = std::uniform_int_distribution<int>(0, 99)(rng);
    const std::string expr = RandomExpr(rng, vars, 2, s.uses);
    if (roll < 40 || vars.empty()) {
      const std::string v = absl::StrCat("v", fresh++);
      s.text = absl::StrCat("let ", v, " = ", expr, ";");
      s.defs.insert(v);
      vars.push_back(v);
    } else if (roll < 65) {
      const std::string& v = vars[std::uniform_int_distribution<size_t>(
          0, vars.size() - 1)(rng)];
      s.text = absl::StrCat(v, " = ", expr, ";");
      s.defs.insert(v);
      s.declares = v;
    } else if (roll < 75) {
      s.text = absl::StrCat("assert ", expr, " != 7;");
    } else if (roll < 87) {
      const std::string v = absl::StrCat("v", fresh++);
      const bool clock = roll % 2 == 0;
      s.text = absl::StrCat("let ", v, " = ",
                            clock ? "now_ticks()" : "rand_int(0, 9)", " + ",
                            expr, ";");
      s.defs = {v, kState};
      s.uses.insert(kState);
      vars.push_back(v);
    } else if (roll < 94) {
      const std::string v = absl::StrCat("v", fresh++);
      s.text = absl::StrCat("let ", v, " = 100 / ", expr, ";");
      s.defs.insert(v);
      vars.push_back(v);
    } else {
      s.text = absl::StrCat("let junk", fresh++, " = ghost(", expr, ");");
      s.defs.insert(absl::StrCat("junk", fresh - 1));
    }
    out.push_back(std::move(s));
  }
  return out;
}

// Smallest subset of statements that holds the last definition of every
// target and, for every kept statement, the statement each of its reads
// comes from and the `let` of any variable it assigns. Exhaustive over all
// subsets.
std::set<int> BruteForceSlice(const std::vector<GenStmt>& stmts,
                              const std::set<std::string>& targets,
                              bool* unique) {
  const int n = static_cast<int>(stmts.size());
  auto reaching = [&](int i, const std::string& var) {
    for (int j = i - 1; j >= 0; --j) {
      if (stmts[j].defs.contains(var)) return j;
    }
    return -1;
  };
  auto declaration = [&](const std::string& var) {
    for (int j = 0; j < n; ++j) {
      if (absl::StartsWith(stmts[j].text, absl::StrCat("let ", var, " ="))) {
        return j;
      }
    }
    return -1;
  };
  std::set<int> required;
  for (const std::string& t : targets) {
    const int j = reaching(n, t);
    if (j >= 0) required.insert(j);
  }
  std::vector<std::set<int>> best;
  size_t best_size = n + 1;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::set<int> s;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) s.insert(i);
    }
    if (!std::includes(s.begin(), s.end(), required.begin(), required.end())) {
      continue;
    }
    bool closed = true;
    for (int i : s) {
      for (const std::string& u : stmts[i].uses) {
        const int j = reaching(i, u);
        if (j >= 0 && !s.contains(j)) closed = false;
      }
      if (!stmts[i].declares.empty()) {
        const int d = declaration(stmts[i].declares);
        if (d >= 0 && !s.contains(d)) closed = false;
      }
    }
    if (!closed) continue;
    if (s.size() < best_size) {
      best_size = s.size();
      best = {s};
    } else if (s.size() == best_size) {
      best.push_back(s);
    }
  }
  *unique = best.size() == 1;
  return best.empty() ? std::set<int>{} : best.front();
}

Result SliceOracle() {
  const Clock::time_point t0 = Clock::now();
  std::mt19937_64 rng(20240229);
  constexpr int kBlocks = 20000;
  int executed_ok = 0;
  runtime::SutRegistry empty;
  for (int b = 0; b < kBlocks; ++b) {
    const std::vector<GenStmt> stmts = RandomStraightLine(rng);
    std::string text;
    std::vector<std::string> defined;
    for (const GenStmt& s : stmts) {
      absl::StrAppend(&text, s.text, "\n");
      for (const std::string& d : s.defs) {
        if (d != kState && !absl::StartsWith(d, "junk") &&
            std::find(defined.begin(), defined.end(), d) == defined.end()) {
          defined.push_back(d);
        }
      }
    }
    if (defined.empty()) continue;
    std::set<std::string> targets;
    for (const std::string& d : defined) {
      if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) targets.insert(d);
    }
    if (targets.empty()) targets.insert(defined.back());

    absl::StatusOr<testlang::Block> block = testlang::ParseStatements(text);
    if (!block.ok()) {
      return {false, absl::StrCat("block ", b, " does not parse: ",
                                  std::string(block.status().message()))};
    }
    bool unique = false;
    const std::set<int> expected = BruteForceSlice(stmts, targets, &unique);
    if (!unique) return {false, absl::StrCat("block ", b, ": no least slice")};
    absl::StatusOr<analysis::Slice> slice =
        analysis::BackwardSlice(analysis::BuildDefUseGraph(*block), targets);
    if (!slice.ok()) {
      return {false, absl::StrCat("block ", b, ": ",
                                  std::string(slice.status().message()))};
    }
    std::set<int> got;
    for (const testlang::StmtPath& p : slice->kept) {
      if (p.size() != 1) return {false, "nested path in straight-line block"};
      got.insert(p[0]);
    }
    if (got != expected) {
      return {false, absl::StrCat("block ", b, " differs from brute force:\n",
                                  text, "targets ",
                                  absl::StrJoin(targets, ","), " kept ",
                                  absl::StrJoin(got, ","), " expected ",
                                  absl::StrJoin(expected, ","))};
    }

    runtime::Environment env;
    env.seed = static_cast<uint64_t>(b);
    const runtime::ExecutionOutcome full =
        runtime::Execute(*block, env, empty, {}, nullptr);
    if (full.status != ExecStatus::kOk) continue;
    absl::StatusOr<testlang::Block> refined =
        analysis::RefineSnippet(*block, targets);
    if (!refined.ok()) return {false, "refinement failed on an OK block"};
    const runtime::ExecutionOutcome part =
        runtime::Execute(*refined, env, empty, {}, nullptr);
    if (part.status != ExecStatus::kOk) {
      return {false, absl::StrCat("refined block ", b, " does not run: ",
                                  part.error.value_or(""), "\n", text,
                                  "refined:\n",
                                  testlang::PrintStatements(*refined))};
    }
    for (const std::string& t : targets) {
      if (!runtime::ValueEq(full.bindings.at(t), part.bindings.at(t))) {
        return {false, absl::StrCat("block ", b, ": target ", t, " differs")};
      }
    }
    ++executed_ok;
  }
  const double secs = SecondsSince(t0);
  return {secs < 60.0,
          absl::StrCat(kBlocks, " blocks match brute force, ", executed_ok,
                       " OK blocks reproduce targets, ", secs, " s")};
}

// ---- 3 and 4: pinned date trio ----

constexpr char kTrio[] = MRLIFT_FIXTURE_DIR "/defense/date_trio";

absl::StatusOr<pipeline::AdoptResult> TrioRun(const pipeline::Case& c,
                                              pipeline::Ablation a) {
  pipeline::PipelineConfig cfg;
  cfg.gen.k = 3;
  cfg.gen.repetitions = 2;
  cfg.SetAblation(a);
  auto backend = generator::MakeReplayBackend(std::string(kTrio) + "/fixtures");
  return pipeline::RunAdopt(c, *backend, cfg);
}

const mtc::InputPair* FindPair(const std::vector<mtc::InputPair>& pairs,
                               const std::string& source_literal) {
  for (const mtc::InputPair& p : pairs) {
    auto it = p.source.find("dateA");
    if (it != p.source.end() && runtime::ValueEq(it->second, source_literal)) {
      return &p;
    }
  }
  return nullptr;
}

Result RefinementDefense() {
  absl::StatusOr<pipeline::Case> c = Load(kTrio);
  if (!c.ok()) return {false, std::string(c.status().message())};
  auto full = TrioRun(*c, pipeline::Ablation::kNone);
  auto v2 = TrioRun(*c, pipeline::Ablation::kV2);
  if (!full.ok() || !v2.ok()) return {false, "trio run failed"};
  constexpr char kStray[] = "2023-07-04 09:30:00";
  const mtc::InputPair* rescued = FindPair(full->phase1.pairs, kStray);
  const mtc::InputPair* lost = FindPair(v2->phase1.rejected, kStray);
  const bool pair_ok = rescued != nullptr &&
                       rescued->verdict == mtc::Verdict::kValid &&
                       FindPair(v2->phase1.pairs, kStray) == nullptr &&
                       lost != nullptr &&
                       lost->verdict == mtc::Verdict::kInvalid;
  const auto& cf = full->report.candidates;
  const auto& cv = v2->report.candidates;
  const bool dead_ok = !cf.empty() && !cv.empty() &&
                       cf[0].status == CandidateStatus::kCompilable &&
                       cf[0].sliced_away > 0 &&
                       cv[0].status == CandidateStatus::kUncompilable;
  return {pair_ok && dead_ok,
          absl::StrCat("stray-assert pair ", rescued ? "VALID" : "missing",
                       " with refinement, ",
                       lost ? absl::StrCat("INVALID (", lost->reason, ")")
                            : "not rejected",
                       " under v2; dead-erroneous candidate ",
                       cf.empty() ? "?" : pipeline::CandidateStatusName(cf[0].status),
                       " vs ",
                       cv.empty() ? "?" : pipeline::CandidateStatusName(cv[0].status),
                       " under v2")};
}

Result ValidationDefense() {
  absl::StatusOr<pipeline::Case> trio = Load(kTrio);
  absl::StatusOr<pipeline::Case> corpus =
      Load(std::string(MRLIFT_CORPUS_DIR) + "/date_format");
  if (!trio.ok() || !corpus.ok()) return {false, "cases do not load"};
  int checks = 0;
  // Through the pipeline, with and without refinement.
  for (pipeline::Ablation a : {pipeline::Ablation::kNone, pipeline::Ablation::kV2}) {
    for (int round = 0; round < 2; ++round) {
      auto r = TrioRun(*trio, a);
      if (!r.ok()) return {false, "trio run failed"};
      const mtc::InputPair& first = r->phase1.pairs.front();
      if (first.provenance != mtc::Provenance::kHardcoded ||
          first.verdict != mtc::Verdict::kValid) {
        return {false, "hard-coded pair not VALID"};
      }
      const mtc::InputPair* bad = nullptr;
      for (const mtc::InputPair& p : r->phase1.rejected) {
        auto it = p.followup.find("dateB");
        if (it != p.followup.end() &&
            runtime::ValueEq(it->second, "2025-01-01 00:00:00")) {
          bad = &p;
        }
      }
      if (bad == nullptr || !absl::StartsWith(bad->reason, "ASSERT_FAIL")) {
        return {false, "year-shifted pair not INVALID(ASSERT_FAIL)"};
      }
      if (FindPair(r->phase1.pairs, "2024-01-01 00:00:00") != &first) {
        return {false, "year-shifted pair accepted"};
      }
      checks += 2;
    }
  }
  // Directly, on both copies of the case.
  for (const pipeline::Case* c : {&*trio, &*corpus}) {
    auto hard = mtc::HardcodedPair(c->model, c->registry, {});
    if (!hard.ok()) return {false, "no hard-coded pair"};
    mtc::InputPair h = *hard;
    mtc::InputPair bad;
    bad.source = {{"dateA", "2024-01-01 00:00:00"}};
    bad.followup = {{"dateB", "2025-01-01 00:00:00"}};
    bad.provenance = mtc::Provenance::kGenerated;
    if (pipeline::ValidatePair(c->model, h, c->registry, {}) !=
            mtc::Verdict::kValid ||
        pipeline::ValidatePair(c->model, bad, c->registry, {}) !=
            mtc::Verdict::kInvalid ||
        !absl::StartsWith(bad.reason, "ASSERT_FAIL")) {
      return {false, absl::StrCat(c->name, ": direct validation wrong")};
    }
    checks += 2;
  }
  return {true, absl::StrCat(checks, " verdicts: hard-coded VALID, "
                                     "2024-01-01/2025-01-01 INVALID(ASSERT_FAIL)")};
}

// ---- 5 and 6: selection ----

constexpr char kGroundTruthEquivalent[] = R"(fn transform_medium_date_next_day(dateA) {
    let parts = parse_date(dateA);
    let next = plus_days(format_date(parts, "long"), 1);
    return next;
}
)";

// Works only for January: forces the month and bumps the day.
constexpr char kJanuaryOverfit[] = R"(fn transform_medium_date_next_day(dateA) {
    let p = parse_date(dateA);
    return format_date([p[0], 1, p[2] + 1, p[3], p[4], p[5]], "long");
}
)";

constexpr char kUncompilable[] = R"(fn transform_medium_date_next_day(dateA) {
    return next_calendar_day(dateA);
}
)";

std::vector<Bindings> DatePool(const std::vector<std::string>& dates) {
  std::vector<Bindings> pool;
  for (const std::string& d : dates) pool.push_back({{"dateA", d}});
  return pool;
}

Result SelectionCorrectness() {
  absl::StatusOr<pipeline::Case> c =
      Load(std::string(MRLIFT_CORPUS_DIR) + "/date_format");
  if (!c.ok()) return {false, std::string(c.status().message())};
  // Overfit first so that winning by tie-break is ruled out.
  const std::vector<CandidateTransformation> cands = {
      Candidate(*c, kJanuaryOverfit, 0), Candidate(*c, kUncompilable, 1),
      Candidate(*c, kGroundTruthEquivalent, 2)};
  if (cands[0].status != CandidateStatus::kCompilable ||
      cands[1].status != CandidateStatus::kUncompilable ||
      cands[2].status != CandidateStatus::kCompilable) {
    return {false, "candidate statuses unexpected"};
  }
  const std::vector<Bindings> january = DatePool(
      {"2024-01-01 00:00:00", "2023-01-15 10:20:30", "1999-01-09 23:59:59"});
  std::vector<Bindings> with_feb = january;
  with_feb.push_back({{"dateA", "2024-02-10 08:00:00"}});

  const pipeline::AssessmentReport jan =
      pipeline::AssessCandidates(*c, cands, january, {});
  const pipeline::AssessmentReport feb =
      pipeline::AssessCandidates(*c, cands, with_feb, {});
  const int overfit_jan = jan.candidates[0].applicability->applicable;
  const int overfit_feb = feb.candidates[0].applicability->applicable;
  const int gt_feb = feb.candidates[2].applicability->applicable;
  const bool ok = feb.chosen == 2 && gt_feb == static_cast<int>(with_feb.size()) &&
                  overfit_feb < gt_feb && overfit_jan == static_cast<int>(january.size()) &&
                  !feb.candidates[1].applicability.has_value();
  return {ok, absl::StrCat("chosen #", feb.chosen.value_or(-1), " with ", gt_feb,
                           "/", with_feb.size(), "; January-only overfit ",
                           overfit_feb, "/", with_feb.size(),
                           " (", overfit_jan, "/", january.size(),
                           " without the February date)")};
}

Result TieBreak() {
  absl::StatusOr<pipeline::Case> c =
      Load(std::string(MRLIFT_CORPUS_DIR) + "/date_format");
  if (!c.ok()) return {false, std::string(c.status().message())};
  const std::vector<CandidateTransformation> cands = {
      Candidate(*c, kUncompilable, 0),
      Candidate(*c, kGroundTruthEquivalent, 1),
      Candidate(*c, "fn transform_medium_date_next_day(dateA) {\n"
                    "    return plus_days(dateA, 1);\n}\n", 2)};
  const std::vector<Bindings> pool = DatePool(
      {"2024-01-01 00:00:00", "2024-02-28 12:00:00", "2023-12-31 01:02:03"});
  const pipeline::AssessmentReport r =
      pipeline::AssessCandidates(*c, cands, pool, {});
  const bool both_full =
      r.candidates[1].applicability->applicable == 3 &&
      r.candidates[2].applicability->applicable == 3;
  return {both_full && r.chosen == 1 && r.tie_broken,
          absl::StrCat("two 3/3 candidates, chosen #", r.chosen.value_or(-1),
                       ", tie_broken=", r.tie_broken ? "true" : "false")};
}

// ---- 7 and 8: corpus runs ----

struct CorpusRun {
  int rc = 0;
  int cases = 0;
  std::map<std::string, bool> n100;
  std::map<std::string, std::string> files;
};

CorpusRun AdoptAll(const std::string& tag, const std::string& ablation) {
  const fs::path out = ScratchDir(tag);
  CorpusRun run;
  run.rc = Cli({"--corpus", MRLIFT_CORPUS_DIR, "--out", out.string(),
                "--backend", "replay", "--ablate", ablation, "adopt", "--all"});
  if (!fs::exists(out / "adopt_summary.json")) return run;
  const nlohmann::json s =
      nlohmann::json::parse(ReadFile(out / "adopt_summary.json"));
  for (const nlohmann::json& c : s["cases"]) {
    ++run.cases;
    run.n100[c["case"].get<std::string>()] =
        c.contains("generalizability") && c["generalizability"]["n100"].get<bool>();
  }
  run.files = Snapshot(out);
  return run;
}

int CountTrue(const std::map<std::string, bool>& m) {
  return static_cast<int>(std::count_if(m.begin(), m.end(),
                                        [](const auto& kv) { return kv.second; }));
}

Result EndToEnd() {
  const Clock::time_point t0 = Clock::now();
  const CorpusRun a = AdoptAll("e2e_a", "none");
  const CorpusRun b = AdoptAll("e2e_b", "none");
  const double secs = SecondsSince(t0);
  const int good = CountTrue(a.n100);
  const bool identical = !a.files.empty() && a.files == b.files;
  const bool ok = a.cases >= 20 && good * 10 >= a.cases * 7 && identical &&
                  secs < 120.0;
  return {ok, absl::StrCat(good, "/", a.cases,
                           " cases 100%-generalizable, reports ",
                           identical ? "byte-identical" : "DIFFER",
                           " across runs (", a.files.size(), " files), ",
                           secs, " s for two runs")};
}

Result AblationDirection() {
  const CorpusRun base = AdoptAll("abl_none", "none");
  const int base_count = CountTrue(base.n100);
  bool ok = base.cases >= 20;
  std::string detail = absl::StrCat("default ", base_count);
  for (const char* v : {"v1", "v2", "v3"}) {
    const CorpusRun run = AdoptAll(absl::StrCat("abl_", v), v);
    const int count = CountTrue(run.n100);
    std::vector<std::string> drops;
    for (const auto& [name, good] : base.n100) {
      auto it = run.n100.find(name);
      if (good && (it == run.n100.end() || !it->second)) drops.push_back(name);
    }
    ok = ok && count <= base_count && !drops.empty();
    absl::StrAppend(&detail, ", ", v, " ", count, " (drops: ",
                    drops.empty() ? "none" : absl::StrJoin(drops, " "), ")");
  }
  return {ok, detail};
}

// ---- 9: adequacy ----

bool KilledBy(const nlohmann::json& mutant, const std::vector<std::string>& suites) {
  if (!mutant.contains("killed_by")) return false;
  for (const std::string& s : suites) {
    if (!mutant["killed_by"].contains(s)) continue;
    for (const nlohmann::json& k : mutant["killed_by"][s]) {
      if (k.get<bool>()) return true;
    }
  }
  return false;
}

Result AdequacyDirection() {
  const Clock::time_point t0 = Clock::now();
  const fs::path out = ScratchDir("eval");
  std::string err;
  const int rc = Cli({"--corpus", MRLIFT_CORPUS_DIR, "--out", out.string(),
                      "--backend", "replay", "eval", "--all"},
                     &err);
  if (rc != 0 || !fs::exists(out / "eval_summary.json")) {
    return {false, absl::StrCat("eval failed (", rc, "): ", err)};
  }
  const nlohmann::json s = nlohmann::json::parse(ReadFile(out / "eval_summary.json"));
  const double score_d = s["combos"]["D"]["mutation_score"];
  const double score_dm = s["combos"]["D+M"]["mutation_score"];
  const double cov_d = s["combos"]["D"]["line_coverage"];
  const double cov_dm = s["combos"]["D+M"]["line_coverage"];
  bool ok = score_dm > score_d && cov_dm >= cov_d;
  std::string detail = absl::StrCat("score D ", score_d, " -> D+M ", score_dm,
                                    ", coverage D ", cov_d, " -> D+M ", cov_dm);
  const std::vector<std::string> mr = {"mtc", "M"};
  const std::vector<std::string> non_mr = {"dev", "L"};
  for (const auto& [case_name, mutant_name] :
       std::vector<std::pair<std::string, std::string>>{
           {"cipher", "argument_swap"}, {"registry_clock", "missing_update"}}) {
    const nlohmann::json e =
        nlohmann::json::parse(ReadFile(out / case_name / "eval.json"));
    bool found = false;
    for (const nlohmann::json& m : e["adequacy"]["mutants"]) {
      if (m["operator"] != "SEEDED" ||
          !absl::StrContains(m["description"].get<std::string>(), mutant_name)) {
        continue;
      }
      found = true;
      const bool by_mr = KilledBy(m, mr);
      const bool by_non_mr = KilledBy(m, non_mr);
      ok = ok && by_mr && !by_non_mr;
      absl::StrAppend(&detail, "; ", case_name, "/", mutant_name, " ",
                      by_mr ? "killed" : "SURVIVES", " by MR, ",
                      by_non_mr ? "KILLED" : "survives", " non-MR");
    }
    if (!found) {
      ok = false;
      absl::StrAppend(&detail, "; ", case_name, "/", mutant_name, " missing");
    }
  }
  const double secs = SecondsSince(t0);
  ok = ok && secs < 120.0;
  absl::StrAppend(&detail, "; ", secs, " s");
  return {ok, detail};
}

// ---- 10: step budget and determinism ----

Result DeterminismAndBudget() {
  auto programs = testlang::ParseProgram(R"(
fn spin(n) { return spin(n + 1); }
fn ping(n) { return pong(n); }
fn pong(n) { return ping(n + 1); }
fn grow(xs) { return grow(push(xs, len(xs))); }
fn nest(n) {
    let t = 0;
    for i in range(0, 1000000) {
        for j in range(0, 1000000) {
            t = t + 1;
        }
    }
    return t;
}
)");
  if (!programs.ok()) return {false, "fixture programs do not parse"};
  // Loops run into the step budget at any size; recursion does too as long
  // as the budget is reached before the call-depth ceiling.
  const std::vector<std::string> loops = {
      "let v = nest(0);",
      "let s = 0;\nfor i in range(0, 1000000000) { s = s + i; }"};
  const std::vector<std::string> recursions = {
      "let v = spin(0);", "let v = ping(0);", "let xs = grow([]);"};
  runtime::SutRegistry empty;
  int budget_checks = 0;
  int ceiling_checks = 0;
  const Clock::time_point t0 = Clock::now();
  auto run = [&](const std::string& body, int64_t steps, int depth) {
    auto block = testlang::ParseStatements(body);
    runtime::Limits limits;
    limits.max_steps = steps;
    limits.max_call_depth = depth;
    limits.max_value_size = 1LL << 40;
    return runtime::Execute(*block, {}, empty, limits, &*programs);
  };
  for (int64_t steps : std::vector<int64_t>{10, 1000, 50000,
                                            runtime::kDefaultMaxSteps}) {
    for (const std::string& body : loops) {
      const runtime::ExecutionOutcome out = run(body, steps, 200);
      if (out.status != ExecStatus::kStepLimit) {
        return {false, absl::StrCat("'", body, "' at ", steps, " steps gave ",
                                    runtime::ExecStatusName(out.status))};
      }
      ++budget_checks;
    }
  }
  for (int64_t steps : std::vector<int64_t>{10, 100, 1000, 2000}) {
    for (const std::string& body : recursions) {
      const runtime::ExecutionOutcome out =
          run(body, steps, runtime::kCallDepthCeiling);
      if (out.status != ExecStatus::kStepLimit) {
        return {false, absl::StrCat("'", body, "' at ", steps, " steps gave ",
                                    runtime::ExecStatusName(out.status))};
      }
      ++budget_checks;
    }
  }
  // Past the ceiling recursion stops with an error instead of crashing.
  for (const std::string& body : recursions) {
    const runtime::ExecutionOutcome out =
        run(body, runtime::kDefaultMaxSteps * 100, 1 << 30);
    if (out.status == ExecStatus::kOk) return {false, "runaway recursion OK"};
    ++ceiling_checks;
  }
  const double budget_secs = SecondsSince(t0);

  // SYNTH twice per case and at two parallelism levels; REPLAY twice.
  int det_checks = 0;
  auto synth = generator::MakeSynthBackend();
  for (const char* name : {"leap_year", "gcd", "date_format", "registry_clock",
                           "matrix_trace"}) {
    absl::StatusOr<pipeline::Case> c =
        Load(std::string(MRLIFT_CORPUS_DIR) + "/" + name);
    if (!c.ok()) return {false, std::string(c.status().message())};
    std::string first;
    for (int par : {1, 1, 4}) {
      pipeline::PipelineConfig cfg;
      cfg.gen.backend = generator::BackendKind::kSynth;
      cfg.gen.seed = 1234;
      cfg.gen.parallelism = par;
      auto r = pipeline::RunAdopt(*c, *synth, cfg);
      if (!r.ok()) return {false, std::string(r.status().message())};
      cfg.gen.parallelism = 1;
      const std::string dump = pipeline::AdoptJson(*c, *r, cfg, false).dump();
      if (first.empty()) first = dump;
      if (dump != first) return {false, absl::StrCat(name, ": SYNTH run differs")};
      ++det_checks;
    }
  }
  const CorpusRun a = AdoptAll("det_a", "v1");
  const CorpusRun b = AdoptAll("det_b", "v1");
  if (a.files.empty() || a.files != b.files) return {false, "REPLAY run differs"};
  ++det_checks;
  return {budget_secs < 30.0,
          absl::StrCat(budget_checks, " runaway executions stopped with "
                                      "STEP_LIMIT, ",
                       ceiling_checks, " at the call-depth ceiling, in ",
                       budget_secs, " s; ", det_checks,
                       " repeated runs bit-identical")};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Result()> run;
};

}  // namespace
}  // namespace mrlift::acceptance

int main(int argc, char** argv) {
  using namespace mrlift::acceptance;
  CLI::App app{"mrlift acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "run one criterion (1-10)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "parser round-trip", ParserRoundTrip},
      {2, "slice oracle equivalence", SliceOracle},
      {3, "refinement defense", RefinementDefense},
      {4, "validation defense", ValidationDefense},
      {5, "selection correctness", SelectionCorrectness},
      {6, "tie-break contract", TieBreak},
      {7, "end-to-end corpus run", EndToEnd},
      {8, "ablation direction", AblationDirection},
      {9, "adequacy direction", AdequacyDirection},
      {10, "determinism and budget", DeterminismAndBudget},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name
              << ": " << r.detail << std::endl;
    failed += !r.pass;
  }
  return failed == 0 ? 0 : 1;
}
