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

#include <algorithm>
#include <deque>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "mrlift/analysis/def_use.h"
#include "mrlift/analysis/slicer.h"
#include "mrlift/mtc/mtc.h"

namespace mrlift::mtc {

using testlang::Block;
using testlang::Expr;
using testlang::LetStmt;
using testlang::Stmt;

namespace {

constexpr char kFollowupTuple[] = "__followups";

const Bindings::mapped_type* Lookup(const Bindings& b, const std::string& k) {
  auto it = b.find(k);
  return it == b.end() ? nullptr : &it->second;
}

// Statements that survive once the annotated lets are rebound. Anything
// outside the init slices stays, together with whatever it still needs;
// the walk does not look behind an annotated let, and follow-up lets are
// dropped entirely when `keep_followup_lets` is false.
std::set<StmtPath> SurvivorsAfterRebinding(const MtcModel& m,
                                           bool keep_followup_lets) {
  const analysis::DefUseGraph graph = analysis::BuildDefUseGraph(m.full_body);
  std::set<StmtPath> source_lets;
  std::set<StmtPath> followup_lets;
  testlang::ForEachStmt(m.full_body, [&](const Stmt& s, const StmtPath& p) {
    if (s.HasAnnotation(kSourceAnnotation)) source_lets.insert(p);
    if (s.HasAnnotation(kFollowupAnnotation)) followup_lets.insert(p);
  });

  std::deque<StmtPath> work;
  for (const StmtPath& node : graph.nodes) {
    if (m.source_init.count(node) == 0 && m.followup_init.count(node) == 0) {
      work.push_back(node);
    }
  }
  work.insert(work.end(), source_lets.begin(), source_lets.end());
  if (keep_followup_lets) {
    work.insert(work.end(), followup_lets.begin(), followup_lets.end());
  }

  std::set<StmtPath> kept;
  while (!work.empty()) {
    StmtPath node = std::move(work.front());
    work.pop_front();
    if (followup_lets.count(node) != 0 && !keep_followup_lets) continue;
    if (!kept.insert(node).second) continue;
    if (auto it = graph.parent.find(node); it != graph.parent.end()) {
      work.push_back(it->second);
    }
    if (source_lets.count(node) != 0 || followup_lets.count(node) != 0) {
      continue;
    }
    if (auto it = graph.edges.find(node); it != graph.edges.end()) {
      work.insert(work.end(), it->second.begin(), it->second.end());
    }
  }
  return kept;
}

absl::Status BindLiteral(Stmt& stmt, const Bindings& values,
                         const char* side) {
  auto* let = std::get_if<LetStmt>(&stmt.node);
  const runtime::Value* v = Lookup(values, let->name);
  if (v == nullptr) {
    return absl::InvalidArgumentError(absl::StrCat(
        "no value for ", side, " variable '", let->name, "'"));
  }
  let->value = runtime::Literalize(*v);
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<InputPair> HardcodedPair(const MtcModel& m,
                                        const runtime::SutRegistry& registry,
                                        const runtime::Limits& limits) {
  const testlang::Program helpers = HelperProgram(m);
  const runtime::ExecutionOutcome out =
      runtime::Execute(InitBlock(m), {}, registry, limits, &helpers);
  if (out.status != runtime::ExecStatus::kOk) {
    return absl::FailedPreconditionError(absl::StrCat(
        "hard-coded inputs of '", m.test_name, "' did not evaluate: ",
        runtime::ExecStatusName(out.status), " ", out.error.value_or("")));
  }
  InputPair pair;
  pair.provenance = Provenance::kHardcoded;
  for (const std::string& v : m.source_vars) {
    pair.source[v] = out.bindings.at(v);
  }
  for (const std::string& v : m.followup_vars) {
    pair.followup[v] = out.bindings.at(v);
  }
  return pair;
}

absl::StatusOr<Block> SubstituteInputs(const MtcModel& m,
                                       const InputPair& pair) {
  Block body = m.full_body;
  for (Stmt& s : body.stmts) {
    if (s.HasAnnotation(kSourceAnnotation)) {
      if (absl::Status st = BindLiteral(s, pair.source, "source"); !st.ok()) {
        return st;
      }
    } else if (s.HasAnnotation(kFollowupAnnotation)) {
      if (absl::Status st = BindLiteral(s, pair.followup, "follow-up");
          !st.ok()) {
        return st;
      }
    }
  }
  return analysis::ApplySlice(body, SurvivorsAfterRebinding(m, true));
}

absl::StatusOr<Block> InstantiateWithTransformation(const MtcModel& m,
                                                    const testlang::FuncDef& t,
                                                    const Bindings& source) {
  Block body = m.full_body;
  int first_followup = -1;
  int last_source = -1;
  for (Stmt& s : body.stmts) {
    if (s.HasAnnotation(kSourceAnnotation)) {
      if (absl::Status st = BindLiteral(s, source, "source"); !st.ok()) {
        return st;
      }
      last_source = s.id;
    } else if (s.HasAnnotation(kFollowupAnnotation) && first_followup < 0) {
      first_followup = s.id;
    }
  }
  const int insert_at = std::max(first_followup, last_source + 1);

  std::vector<Expr> args;
  for (const std::string& v : m.source_vars) args.push_back(testlang::MakeVar(v));
  Expr call = testlang::MakeCall(t.name, std::move(args));
  std::vector<Stmt> group;
  const size_t k = m.followup_vars.size();
  if (k == 1) {
    Stmt let = testlang::MakeLet(m.followup_vars[0], std::move(call),
                                 {kFollowupAnnotation});
    std::get<LetStmt>(let.node).type = m.followup_types[0];
    group.push_back(std::move(let));
  } else {
    group.push_back(testlang::MakeLet(
        kFollowupTuple,
        testlang::MakeCall("unpack",
                           {std::move(call),
                            Expr{testlang::IntLit{static_cast<int64_t>(k)}}})));
    for (size_t i = 0; i < k; ++i) {
      Stmt let = testlang::MakeLet(
          m.followup_vars[i],
          testlang::MakeIndex(testlang::MakeVar(kFollowupTuple),
                              Expr{testlang::IntLit{static_cast<int64_t>(i)}}),
          {kFollowupAnnotation});
      std::get<LetStmt>(let.node).type = m.followup_types[i];
      group.push_back(std::move(let));
    }
  }

  const std::set<StmtPath> kept = SurvivorsAfterRebinding(m, false);
  std::vector<int> kept_top;
  for (const Stmt& s : body.stmts) {
    if (kept.count(StmtPath{s.id}) != 0) kept_top.push_back(s.id);
  }
  Block sliced = analysis::ApplySlice(body, kept);
  auto pos = std::lower_bound(kept_top.begin(), kept_top.end(), insert_at);
  sliced.stmts.insert(sliced.stmts.begin() + (pos - kept_top.begin()),
                      std::make_move_iterator(group.begin()),
                      std::make_move_iterator(group.end()));
  testlang::RenumberStatements(sliced);
  return sliced;
}

std::string CanonicalText(const Bindings& bindings) {
  std::vector<std::string> parts;
  for (const auto& [name, value] : bindings) {
    parts.push_back(absl::StrCat(name, "=", runtime::LiteralText(value)));
  }
  return absl::StrJoin(parts, "; ");
}

}  // namespace mrlift::mtc
