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

#include "mrlift/analysis/def_use.h"

#include "absl/strings/str_cat.h"
#include "mrlift/testlang/builtins.h"

namespace mrlift::analysis {

using testlang::Block;
using testlang::CallExpr;
using testlang::Expr;
using testlang::FuncDef;
using testlang::Program;
using testlang::Stmt;

namespace {

class StatefulFinder {
 public:
  explicit StatefulFinder(const CallContext& context) : context_(context) {}

  // `module` is the program plain callees resolve against.
  bool IsStateful(const std::string& callee, const Program* module) {
    if (const auto* b = testlang::FindBuiltin(callee);
        b != nullptr && !callee.starts_with(testlang::kSutPrefix)) {
      const FuncDef* shadow =
          module != nullptr ? module->FindFunction(callee) : nullptr;
      if (shadow == nullptr) return b->stateful;
    }
    const FuncDef* fn = nullptr;
    const Program* fn_module = module;
    if (callee.starts_with(testlang::kSutPrefix)) {
      fn_module = context_.sut;
      if (fn_module != nullptr) {
        fn = fn_module->FindFunction(
            callee.substr(testlang::kSutPrefix.size()));
      }
    } else if (module != nullptr) {
      fn = module->FindFunction(callee);
    }
    if (fn == nullptr) return false;
    auto key = std::make_pair(fn_module, fn->name);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    memo_[key] = false;
    bool result = false;
    for (const std::string& c : testlang::CalleesIn(fn->body)) {
      if (IsStateful(c, fn_module)) {
        result = true;
        break;
      }
    }
    memo_[key] = result;
    return result;
  }

 private:
  const CallContext& context_;
  std::map<std::pair<const Program*, std::string>, bool> memo_;
};

using VarId = std::string;
using State = std::map<VarId, std::set<StmtPath>>;

void MergeInto(State& into, const State& from) {
  for (const auto& [var, defs] : from) into[var].insert(defs.begin(), defs.end());
}

class Builder {
 public:
  Builder(DefUseGraph& graph, std::set<std::string> stateful)
      : graph_(graph), stateful_(std::move(stateful)) {}

  void Run(const Block& block, const std::vector<std::string>& params) {
    scopes_.emplace_back();
    for (const std::string& p : params) {
      scopes_.back()[p] = absl::StrCat(p, "@param");
      state_[scopes_.back()[p]];
    }
    Process(block, {}, nullptr);
    for (const auto& [name, vid] : scopes_.front()) {
      if (vid.ends_with("@param")) continue;
      graph_.reaching_at_end[name] = state_[vid];
    }
  }

 private:
  const VarId* Resolve(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) return &found->second;
    }
    return nullptr;
  }

  bool CallsStateful(const Stmt& stmt) const {
    bool found = false;
    for (const Expr* e : testlang::DirectExprs(stmt)) {
      testlang::ForEachExpr(*e, [&](const Expr& sub) {
        if (const auto* c = std::get_if<CallExpr>(&sub.node)) {
          if (stateful_.count(c->callee) != 0) found = true;
        }
      });
    }
    return found;
  }

  void AddUse(const StmtPath& path, const std::string& name,
              const VarId& vid) {
    graph_.uses[path].insert(name);
    const std::set<StmtPath>& reaching = state_[vid];
    graph_.edges[path].insert(reaching.begin(), reaching.end());
  }

  void Process(const Block& block, const StmtPath& prefix,
               const StmtPath* parent) {
    for (const Stmt& stmt : block.stmts) {
      StmtPath path = prefix;
      path.push_back(stmt.id);
      if (seen_.insert(path).second) {
        graph_.nodes.push_back(path);
        graph_.defs[path];
        graph_.uses[path];
        graph_.edges[path];
        if (parent != nullptr) graph_.parent[path] = *parent;
        if (std::holds_alternative<testlang::ReturnStmt>(stmt.node)) {
          graph_.returns.push_back(path);
        }
      }
      for (const std::string& name : testlang::DirectVarUses(stmt)) {
        if (const VarId* vid = Resolve(name)) {
          AddUse(path, name, *vid);
        } else {
          graph_.uses[path].insert(name);
        }
      }
      if (CallsStateful(stmt)) {
        AddUse(path, kStateVar, kStateVar);
        graph_.defs[path].insert(kStateVar);
        state_[kStateVar] = {path};
      }
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, testlang::LetStmt>) {
              const VarId vid =
                  absl::StrCat(n.name, "@", testlang::StmtPathToString(path));
              scopes_.back()[n.name] = vid;
              state_[vid] = {path};
              declared_at_[vid] = path;
              graph_.defs[path].insert(n.name);
            } else if constexpr (std::is_same_v<T, testlang::AssignStmt>) {
              graph_.defs[path].insert(n.name);
              if (const VarId* vid = Resolve(n.name)) {
                // Assigning needs the variable declared.
                auto decl = declared_at_.find(*vid);
                if (decl != declared_at_.end()) {
                  graph_.edges[path].insert(decl->second);
                }
                state_[*vid] = {path};
              }
            } else if constexpr (std::is_same_v<T, testlang::IfStmt>) {
              const State before = state_;
              StmtPath then_prefix = path;
              then_prefix.push_back(0);
              scopes_.emplace_back();
              Process(n.then_block, then_prefix, &path);
              scopes_.pop_back();
              State after_then = std::move(state_);
              state_ = before;
              if (n.else_block) {
                StmtPath else_prefix = path;
                else_prefix.push_back(1);
                scopes_.emplace_back();
                Process(*n.else_block, else_prefix, &path);
                scopes_.pop_back();
              }
              MergeInto(state_, after_then);
            } else if constexpr (std::is_same_v<T, testlang::ForStmt>) {
              const VarId loop_vid =
                  absl::StrCat(n.var, "@", testlang::StmtPathToString(path));
              graph_.defs[path].insert(n.var);
              StmtPath body_prefix = path;
              body_prefix.push_back(0);
              // Iterate the body until the reaching sets stop growing; the
              // state after the loop covers zero or more iterations.
              while (true) {
                const State entry = state_;
                scopes_.emplace_back();
                scopes_.back()[n.var] = loop_vid;
                state_[loop_vid] = {path};
                Process(n.body, body_prefix, &path);
                scopes_.pop_back();
                State merged = entry;
                MergeInto(merged, state_);
                if (merged == entry) {
                  state_ = std::move(merged);
                  break;
                }
                state_ = std::move(merged);
              }
            }
          },
          stmt.node);
    }
  }

  DefUseGraph& graph_;
  std::set<std::string> stateful_;
  std::vector<std::map<std::string, VarId>> scopes_;
  State state_;
  std::map<VarId, StmtPath> declared_at_;
  std::set<StmtPath> seen_;
};

}  // namespace

std::set<std::string> StatefulCallees(const Block& block,
                                      const CallContext& context) {
  StatefulFinder finder(context);
  std::set<std::string> out;
  for (const std::string& callee : testlang::CalleesIn(block)) {
    if (finder.IsStateful(callee, context.functions)) out.insert(callee);
  }
  return out;
}

DefUseGraph BuildDefUseGraph(const Block& block, const CallContext& context,
                             const std::vector<std::string>& params) {
  DefUseGraph graph;
  Builder builder(graph, StatefulCallees(block, context));
  builder.Run(block, params);
  return graph;
}

std::string DumpDefUseGraph(const DefUseGraph& graph) {
  std::string out;
  for (const StmtPath& node : graph.nodes) {
    auto it = graph.edges.find(node);
    if (it == graph.edges.end()) continue;
    for (const StmtPath& dep : it->second) {
      absl::StrAppend(&out, testlang::StmtPathToString(node), " -> ",
                      testlang::StmtPathToString(dep), "\n");
    }
  }
  return out;
}

}  // namespace mrlift::analysis
