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

#include <deque>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "mrlift/analysis/def_use.h"
#include "mrlift/analysis/slicer.h"
#include "mrlift/mtc/mtc.h"
#include "mrlift/testlang/builtins.h"

namespace mrlift::mtc {

using testlang::Block;
using testlang::CallExpr;
using testlang::Expr;
using testlang::Program;
using testlang::Stmt;

namespace {

absl::Status ExtractionError(std::string_view message) {
  return absl::FailedPreconditionError(
      absl::StrCat("extraction: ", std::string(message)));
}

struct CallSite {
  std::string callee;
  StmtPath stmt;
  std::set<std::string> arg_vars;
};

// Closure over data edges that does not look through annotated lets, so a
// follow-up written in terms of the source still counts as follow-up only.
std::set<StmtPath> CloseStoppingAt(const analysis::DefUseGraph& graph,
                                   const std::set<StmtPath>& seeds,
                                   const std::set<StmtPath>& barriers) {
  std::set<StmtPath> seen;
  std::deque<StmtPath> work(seeds.begin(), seeds.end());
  while (!work.empty()) {
    StmtPath node = std::move(work.front());
    work.pop_front();
    if (!seen.insert(node).second) continue;
    if (barriers.count(node) != 0) continue;
    if (auto it = graph.edges.find(node); it != graph.edges.end()) {
      for (const StmtPath& dep : it->second) work.push_back(dep);
    }
  }
  return seen;
}

}  // namespace

std::vector<std::string> AnnotatedTests(const Program& program) {
  std::vector<std::string> out;
  for (const testlang::TestDef& t : program.tests) {
    bool annotated = false;
    testlang::ForEachStmt(t.body, [&](const Stmt& s, const StmtPath&) {
      if (s.HasAnnotation(kSourceAnnotation)) annotated = true;
    });
    if (annotated) out.push_back(t.name);
  }
  return out;
}

absl::StatusOr<MtcModel> ExtractMtc(const Program& program,
                                    const std::string& test_name,
                                    const runtime::SutRegistry& registry) {
  const testlang::TestDef* test = program.FindTest(test_name);
  if (test == nullptr) {
    return ExtractionError(absl::StrCat("no test named '", test_name, "'"));
  }
  MtcModel m;
  m.test_name = test_name;
  m.full_body = test->body;
  m.helpers = program.functions;

  std::set<StmtPath> source_lets;
  std::set<StmtPath> followup_lets;
  absl::Status placement = absl::OkStatus();
  testlang::ForEachStmt(m.full_body, [&](const Stmt& s, const StmtPath& path) {
    const bool is_source = s.HasAnnotation(kSourceAnnotation);
    const bool is_followup = s.HasAnnotation(kFollowupAnnotation);
    if (!is_source && !is_followup) return;
    const auto* let = std::get_if<testlang::LetStmt>(&s.node);
    if (let == nullptr || path.size() != 1) {
      placement = ExtractionError(absl::StrCat(
          "input annotations must be on top-level let statements (statement ",
          testlang::StmtPathToString(path), ")"));
      return;
    }
    if (is_source && is_followup) {
      placement = ExtractionError(absl::StrCat(
          "variable '", let->name, "' is marked both source and followup"));
      return;
    }
    if (is_source) {
      m.source_vars.push_back(let->name);
      m.source_types.push_back(let->type);
      source_lets.insert(path);
    } else {
      m.followup_vars.push_back(let->name);
      m.followup_types.push_back(let->type);
      followup_lets.insert(path);
    }
  });
  if (!placement.ok()) return placement;
  if (m.source_vars.empty()) return ExtractionError("no #[source] input");
  if (m.followup_vars.empty()) return ExtractionError("no #[followup] input");

  std::set<std::string> annotated(m.source_vars.begin(), m.source_vars.end());
  annotated.insert(m.followup_vars.begin(), m.followup_vars.end());
  absl::Status reassigned = absl::OkStatus();
  testlang::ForEachStmt(m.full_body, [&](const Stmt& s, const StmtPath&) {
    if (const auto* a = std::get_if<testlang::AssignStmt>(&s.node)) {
      if (annotated.count(a->name) != 0) {
        reassigned = ExtractionError(
            absl::StrCat("input variable '", a->name, "' is reassigned"));
      }
    }
  });
  if (!reassigned.ok()) return reassigned;

  const analysis::CallContext context{&program, &registry.program()};
  const analysis::DefUseGraph graph =
      analysis::BuildDefUseGraph(m.full_body, context);

  std::vector<CallSite> calls;
  testlang::ForEachStmt(m.full_body, [&](const Stmt& s, const StmtPath& path) {
    for (const Expr* e : testlang::DirectExprs(s)) {
      testlang::ForEachExpr(*e, [&](const Expr& sub) {
        const auto* call = std::get_if<CallExpr>(&sub.node);
        if (call == nullptr || !call->callee.starts_with(testlang::kSutPrefix) ||
            registry.Find(call->callee.substr(testlang::kSutPrefix.size())) ==
                nullptr) {
          return;
        }
        CallSite site{call->callee, path, {}};
        for (const Expr& arg : call->args) {
          testlang::ForEachExpr(arg, [&](const Expr& a) {
            if (const auto* v = std::get_if<testlang::VarRef>(&a.node)) {
              site.arg_vars.insert(v->name);
            }
          });
        }
        calls.push_back(std::move(site));
      });
    }
  });
  if (calls.size() != 2) {
    return ExtractionError(absl::StrCat(
        "expected exactly 2 invocations of the system under test, found ",
        calls.size()));
  }

  std::optional<MutInvocation> source_side;
  std::optional<MutInvocation> followup_side;
  std::set<StmtPath> barriers = source_lets;
  barriers.insert(followup_lets.begin(), followup_lets.end());
  for (const CallSite& site : calls) {
    std::set<StmtPath> seeds;
    for (const StmtPath& dep : graph.edges.at(site.stmt)) {
      for (const std::string& var : graph.defs.at(dep)) {
        if (site.arg_vars.count(var) != 0) seeds.insert(dep);
      }
    }
    const std::set<StmtPath> reach = CloseStoppingAt(graph, seeds, barriers);
    bool uses_source = false;
    bool uses_followup = false;
    for (const StmtPath& p : reach) {
      if (source_lets.count(p) != 0) uses_source = true;
      if (followup_lets.count(p) != 0) uses_followup = true;
    }
    if (uses_source && uses_followup) {
      return ExtractionError(absl::StrCat(
          "invocation of '", site.callee, "' at statement ",
          testlang::StmtPathToString(site.stmt),
          " mixes source and follow-up inputs"));
    }
    if (!uses_source && !uses_followup) {
      return ExtractionError(absl::StrCat(
          "invocation of '", site.callee, "' at statement ",
          testlang::StmtPathToString(site.stmt),
          " uses neither source nor follow-up inputs"));
    }
    std::optional<MutInvocation>& slot = uses_source ? source_side
                                                     : followup_side;
    if (slot) {
      return ExtractionError(absl::StrCat(
          "both invocations consume ",
          uses_source ? "source" : "follow-up", " inputs"));
    }
    slot = MutInvocation{site.callee, site.stmt};
  }
  m.invocations = {*source_side, *followup_side};

  for (const StmtPath& node : graph.nodes) {
    const Stmt* stmt = nullptr;
    testlang::ForEachStmt(m.full_body, [&](const Stmt& s, const StmtPath& p) {
      if (p == node) stmt = &s;
    });
    if (stmt == nullptr ||
        !std::holds_alternative<testlang::AssertStmt>(stmt->node)) {
      continue;
    }
    const std::set<StmtPath> deps = analysis::CloseOver(graph, {node});
    if (deps.count(m.invocations[0].stmt) != 0 &&
        deps.count(m.invocations[1].stmt) != 0) {
      m.relation_asserts.push_back(node);
    }
  }
  if (m.relation_asserts.empty()) {
    return ExtractionError("no assert depends on both invocation results");
  }

  absl::StatusOr<analysis::Slice> source_slice = analysis::BackwardSlice(
      graph, std::set<std::string>(m.source_vars.begin(), m.source_vars.end()));
  if (!source_slice.ok()) return source_slice.status();
  absl::StatusOr<analysis::Slice> followup_slice = analysis::BackwardSlice(
      graph,
      std::set<std::string>(m.followup_vars.begin(), m.followup_vars.end()));
  if (!followup_slice.ok()) return followup_slice.status();
  m.source_init = source_slice->kept;
  m.followup_init = followup_slice->kept;
  return m;
}

Program HelperProgram(const MtcModel& m) {
  Program p;
  p.functions = m.helpers;
  return p;
}

Block InitBlock(const MtcModel& m) {
  std::set<StmtPath> kept = m.source_init;
  kept.insert(m.followup_init.begin(), m.followup_init.end());
  return analysis::ApplySlice(m.full_body, kept);
}

}  // namespace mrlift::mtc
