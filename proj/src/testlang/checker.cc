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

#include "mrlift/testlang/checker.h"

#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mrlift/testlang/builtins.h"

namespace mrlift::testlang {
namespace {

struct Binding {
  Span span;
  bool used = false;
  bool warn_unused = false;
};

class Checker {
 public:
  Checker(const Program& program, const SutSignatures& suts)
      : program_(program), suts_(suts) {}

  CheckReport Run() {
    std::set<std::string> fn_names;
    for (const FuncDef& fn : program_.functions) {
      if (!fn_names.insert(fn.name).second) {
        Error(fn.span, absl::StrCat("fn ", fn.name),
              absl::StrCat("duplicate definition of function '", fn.name,
                           "'"));
      }
      if (FindBuiltin(fn.name) != nullptr) {
        Error(fn.span, absl::StrCat("fn ", fn.name),
              absl::StrCat("function '", fn.name, "' redefines a builtin"));
      }
    }
    std::set<std::string> test_names;
    for (const TestDef& t : program_.tests) {
      if (!test_names.insert(t.name).second) {
        Error(t.span, absl::StrCat("test ", t.name),
              absl::StrCat("duplicate definition of test '", t.name, "'"));
      }
    }
    for (const FuncDef& fn : program_.functions) CheckFunction(fn);
    for (const TestDef& t : program_.tests) CheckTest(t);
    report_.ok = report_.error_count() == 0;
    return std::move(report_);
  }

 private:
  void Error(Span span, std::string where, std::string message) {
    report_.diagnostics.push_back(
        {span, Severity::kError, std::move(where), std::move(message)});
  }
  void Warn(Span span, std::string where, std::string message) {
    report_.diagnostics.push_back(
        {span, Severity::kWarning, std::move(where), std::move(message)});
  }

  void CheckFunction(const FuncDef& fn) {
    where_ = absl::StrCat("fn ", fn.name);
    in_test_ = false;
    CollectDeclared(fn.body);
    scopes_.clear();
    scopes_.emplace_back();
    for (const Param& p : fn.params) {
      if (scopes_.back().count(p.name) != 0) {
        Error(fn.span, where_,
              absl::StrCat("duplicate parameter '", p.name, "'"));
      }
      scopes_.back()[p.name] = Binding{fn.span, false, false};
      declared_.insert(p.name);
    }
    CheckBlock(fn.body, /*new_scope=*/false);
    PopScope();
    if (!AlwaysReturns(fn.body)) {
      Error(fn.span, where_,
            absl::StrCat("function '", fn.name,
                         "' does not return on every path"));
    }
  }

  void CheckTest(const TestDef& t) {
    where_ = absl::StrCat("test ", t.name);
    in_test_ = true;
    CollectDeclared(t.body);
    scopes_.clear();
    scopes_.emplace_back();
    CheckBlock(t.body, /*new_scope=*/false);
    PopScope();
  }

  void CollectDeclared(const Block& block) {
    declared_.clear();
    ForEachStmt(block, [&](const Stmt& s, const StmtPath&) {
      if (const auto* l = std::get_if<LetStmt>(&s.node)) {
        declared_.insert(l->name);
      } else if (const auto* f = std::get_if<ForStmt>(&s.node)) {
        declared_.insert(f->var);
      }
    });
  }

  void PopScope() {
    for (const auto& [name, b] : scopes_.back()) {
      if (b.warn_unused && !b.used) {
        Warn(b.span, where_, absl::StrCat("unused variable '", name, "'"));
      }
    }
    scopes_.pop_back();
  }

  Binding* Lookup(const std::string& name) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) return &found->second;
    }
    return nullptr;
  }

  void Declare(const std::string& name, Span span, bool warn_unused) {
    auto& scope = scopes_.back();
    if (scope.count(name) != 0) {
      Error(span, where_,
            absl::StrCat("duplicate definition of variable '", name, "'"));
      return;
    }
    scope[name] = Binding{span, false, warn_unused};
  }

  void CheckBlock(const Block& block, bool new_scope) {
    if (new_scope) scopes_.emplace_back();
    for (const Stmt& s : block.stmts) CheckStmt(s);
    if (new_scope) PopScope();
  }

  void CheckStmt(const Stmt& stmt) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, LetStmt>) {
            CheckExpr(n.value);
            const bool exempt = n.name.starts_with("_") ||
                                stmt.HasAnnotation("source") ||
                                stmt.HasAnnotation("followup");
            Declare(n.name, stmt.span, !exempt);
          } else if constexpr (std::is_same_v<T, AssignStmt>) {
            CheckExpr(n.value);
            if (Lookup(n.name) == nullptr) {
              Error(stmt.span, where_,
                    absl::StrCat("assignment to undeclared variable '", n.name,
                                 "'"));
            }
          } else if constexpr (std::is_same_v<T, ExprStmt>) {
            CheckExpr(n.expr);
          } else if constexpr (std::is_same_v<T, AssertStmt>) {
            CheckExpr(n.cond);
          } else if constexpr (std::is_same_v<T, ReturnStmt>) {
            if (in_test_) {
              Error(stmt.span, where_, "'return' is not allowed in a test");
            }
            if (n.value) CheckExpr(*n.value);
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            CheckExpr(n.cond);
            CheckBlock(n.then_block, true);
            if (n.else_block) CheckBlock(*n.else_block, true);
          } else {
            CheckExpr(n.iterable);
            scopes_.emplace_back();
            scopes_.back()[n.var] = Binding{stmt.span, false, false};
            CheckBlock(n.body, false);
            PopScope();
          }
        },
        stmt.node);
  }

  void CheckExpr(const Expr& expr) {
    ForEachExpr(expr, [&](const Expr& e) {
      if (const auto* v = std::get_if<VarRef>(&e.node)) {
        if (Binding* b = Lookup(v->name)) {
          b->used = true;
        } else if (declared_.count(v->name) != 0) {
          Error(e.span, where_,
                absl::StrCat("use of '", v->name, "' before definition"));
        } else {
          Error(e.span, where_,
                absl::StrCat("unresolved name '", v->name, "'"));
        }
      } else if (const auto* c = std::get_if<CallExpr>(&e.node)) {
        CheckCall(*c, e.span);
      }
    });
  }

  void CheckCall(const CallExpr& call, Span span) {
    std::optional<int> arity;
    if (call.callee.starts_with(kSutPrefix)) {
      auto it = suts_.find(call.callee.substr(kSutPrefix.size()));
      if (it != suts_.end()) arity = it->second;
    } else if (const FuncDef* fn = program_.FindFunction(call.callee)) {
      arity = static_cast<int>(fn->params.size());
    } else if (const BuiltinInfo* b = FindBuiltin(call.callee)) {
      arity = b->arity;
    }
    if (!arity) {
      Error(span, where_, absl::StrCat("unresolved name '", call.callee, "'"));
      return;
    }
    if (*arity != static_cast<int>(call.args.size())) {
      Error(span, where_,
            absl::StrFormat("arity mismatch: '%s' expects %d argument(s), "
                            "got %d",
                            call.callee, *arity, call.args.size()));
    }
  }

  const Program& program_;
  const SutSignatures& suts_;
  CheckReport report_;
  std::string where_;
  bool in_test_ = false;
  std::set<std::string> declared_;
  std::vector<std::map<std::string, Binding>> scopes_;
};

}  // namespace

int CheckReport::error_count() const {
  int n = 0;
  for (const Diagnostic& d : diagnostics) {
    if (d.severity == Severity::kError) ++n;
  }
  return n;
}

std::string FormatDiagnostic(const Diagnostic& d) {
  return absl::StrFormat("%d:%d: %s: [%s] %s", d.span.line, d.span.col,
                         d.severity == Severity::kError ? "error" : "warning",
                         d.where, d.message);
}

bool AlwaysReturns(const Block& block) {
  for (const Stmt& s : block.stmts) {
    if (std::holds_alternative<ReturnStmt>(s.node)) return true;
    if (const auto* i = std::get_if<IfStmt>(&s.node)) {
      if (i->else_block && AlwaysReturns(i->then_block) &&
          AlwaysReturns(*i->else_block)) {
        return true;
      }
    }
  }
  return false;
}

CheckReport CheckProgram(const Program& program, const SutSignatures& suts) {
  return Checker(program, suts).Run();
}

}  // namespace mrlift::testlang
