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

#include "mrlift/analysis/slicer.h"

#include <deque>

#include "absl/strings/str_cat.h"

namespace mrlift::analysis {

using testlang::Block;
using testlang::Stmt;

std::set<StmtPath> CloseOver(const DefUseGraph& graph,
                             const std::set<StmtPath>& seeds) {
  std::set<StmtPath> kept;
  std::deque<StmtPath> work(seeds.begin(), seeds.end());
  while (!work.empty()) {
    StmtPath node = std::move(work.front());
    work.pop_front();
    if (!kept.insert(node).second) continue;
    if (auto it = graph.edges.find(node); it != graph.edges.end()) {
      for (const StmtPath& dep : it->second) {
        if (kept.count(dep) == 0) work.push_back(dep);
      }
    }
    // An enclosing IF/FOR decides whether the statement runs at all.
    if (auto it = graph.parent.find(node); it != graph.parent.end()) {
      if (kept.count(it->second) == 0) work.push_back(it->second);
    }
  }
  return kept;
}

absl::StatusOr<Slice> BackwardSlice(const DefUseGraph& graph,
                                    const std::set<std::string>& targets) {
  std::set<StmtPath> seeds;
  for (const std::string& target : targets) {
    auto it = graph.reaching_at_end.find(target);
    if (it == graph.reaching_at_end.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("slice target '", target, "' is never defined"));
    }
    seeds.insert(it->second.begin(), it->second.end());
  }
  return Slice{CloseOver(graph, seeds), targets};
}

namespace {

Block Restrict(const Block& block, const std::set<StmtPath>& kept,
               const StmtPath& prefix) {
  Block out;
  for (const Stmt& stmt : block.stmts) {
    StmtPath path = prefix;
    path.push_back(stmt.id);
    if (kept.count(path) == 0) continue;
    Stmt copy = stmt;
    if (auto* s = std::get_if<testlang::IfStmt>(&copy.node)) {
      StmtPath p0 = path;
      p0.push_back(0);
      s->then_block = Restrict(s->then_block, kept, p0);
      if (s->else_block) {
        StmtPath p1 = path;
        p1.push_back(1);
        s->else_block = Restrict(*s->else_block, kept, p1);
      }
    } else if (auto* f = std::get_if<testlang::ForStmt>(&copy.node)) {
      StmtPath p0 = path;
      p0.push_back(0);
      f->body = Restrict(f->body, kept, p0);
    }
    out.stmts.push_back(std::move(copy));
  }
  return out;
}

}  // namespace

Block ApplySlice(const Block& block, const std::set<StmtPath>& kept) {
  Block out = Restrict(block, kept, {});
  testlang::RenumberStatements(out);
  return out;
}

absl::StatusOr<Block> RefineSnippet(const Block& block,
                                    const std::set<std::string>& targets,
                                    const CallContext& context) {
  const DefUseGraph graph = BuildDefUseGraph(block, context);
  absl::StatusOr<Slice> slice = BackwardSlice(graph, targets);
  if (!slice.ok()) return slice.status();
  return ApplySlice(block, slice->kept);
}

testlang::FuncDef RefineFunction(const testlang::FuncDef& fn,
                                 const CallContext& context) {
  std::vector<std::string> params;
  for (const testlang::Param& p : fn.params) params.push_back(p.name);
  const DefUseGraph graph = BuildDefUseGraph(fn.body, context, params);
  const std::set<StmtPath> seeds(graph.returns.begin(), graph.returns.end());
  testlang::FuncDef out = fn;
  out.body = ApplySlice(fn.body, CloseOver(graph, seeds));
  return out;
}

}  // namespace mrlift::analysis
