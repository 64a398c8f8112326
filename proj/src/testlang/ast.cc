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

#include "mrlift/testlang/ast.h"

#include <algorithm>
#include <set>

#include "absl/strings/str_join.h"

namespace mrlift::testlang {

bool operator==(const ListExpr& a, const ListExpr& b) {
  return a.items == b.items;
}
bool operator==(const CallExpr& a, const CallExpr& b) {
  return a.callee == b.callee && a.args == b.args;
}
bool operator==(const IndexExpr& a, const IndexExpr& b) {
  return a.target == b.target && a.index == b.index;
}
bool operator==(const UnaryExpr& a, const UnaryExpr& b) {
  return a.op == b.op && a.operand == b.operand;
}
bool operator==(const BinaryExpr& a, const BinaryExpr& b) {
  return a.op == b.op && a.lhs == b.lhs && a.rhs == b.rhs;
}
bool operator==(const Block& a, const Block& b) { return a.stmts == b.stmts; }

const char* UnaryOpText(UnaryOp op) {
  return op == UnaryOp::kNeg ? "-" : "!";
}

const char* BinaryOpText(BinaryOp op) {
  switch (op) {
    case BinaryOp::kOr: return "||";
    case BinaryOp::kAnd: return "&&";
    case BinaryOp::kEq: return "==";
    case BinaryOp::kNe: return "!=";
    case BinaryOp::kLt: return "<";
    case BinaryOp::kLe: return "<=";
    case BinaryOp::kGt: return ">";
    case BinaryOp::kGe: return ">=";
    case BinaryOp::kAdd: return "+";
    case BinaryOp::kSub: return "-";
    case BinaryOp::kMul: return "*";
    case BinaryOp::kDiv: return "/";
    case BinaryOp::kMod: return "%";
  }
  return "?";
}

int Precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::kOr: return 1;
    case BinaryOp::kAnd: return 2;
    case BinaryOp::kEq:
    case BinaryOp::kNe: return 3;
    case BinaryOp::kLt:
    case BinaryOp::kLe:
    case BinaryOp::kGt:
    case BinaryOp::kGe: return 4;
    case BinaryOp::kAdd:
    case BinaryOp::kSub: return 5;
    case BinaryOp::kMul:
    case BinaryOp::kDiv:
    case BinaryOp::kMod: return 6;
  }
  return 0;
}

const char* StmtKindName(StmtKind kind) {
  switch (kind) {
    case StmtKind::kLet: return "LET";
    case StmtKind::kAssign: return "ASSIGN";
    case StmtKind::kExpr: return "EXPR";
    case StmtKind::kAssert: return "ASSERT";
    case StmtKind::kReturn: return "RETURN";
    case StmtKind::kIf: return "IF";
    case StmtKind::kFor: return "FOR";
  }
  return "?";
}

const char* FuncOriginName(FuncOrigin origin) {
  switch (origin) {
    case FuncOrigin::kSut: return "SUT";
    case FuncOrigin::kHelper: return "HELPER";
    case FuncOrigin::kTransformation: return "TRANSFORMATION";
  }
  return "?";
}

bool Stmt::HasAnnotation(std::string_view name) const {
  return std::find(annotations.begin(), annotations.end(), name) !=
         annotations.end();
}

bool TestDef::HasAnnotation(std::string_view name) const {
  return std::find(annotations.begin(), annotations.end(), name) !=
         annotations.end();
}

const FuncDef* Program::FindFunction(std::string_view name) const {
  for (const FuncDef& f : functions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const TestDef* Program::FindTest(std::string_view name) const {
  for (const TestDef& t : tests) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

void RenumberStatements(Block& block) {
  int next = 0;
  for (Stmt& stmt : block.stmts) {
    stmt.id = next++;
    if (auto* s = std::get_if<IfStmt>(&stmt.node)) {
      RenumberStatements(s->then_block);
      if (s->else_block) RenumberStatements(*s->else_block);
    } else if (auto* f = std::get_if<ForStmt>(&stmt.node)) {
      RenumberStatements(f->body);
    }
  }
}

std::string StmtPathToString(const StmtPath& path) {
  return absl::StrJoin(path, "/");
}

namespace {

template <typename S, typename E>
std::vector<E*> DirectExprsImpl(S& stmt) {
  std::vector<E*> out;
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LetStmt> ||
                      std::is_same_v<T, AssignStmt>) {
          out.push_back(&n.value);
        } else if constexpr (std::is_same_v<T, ExprStmt>) {
          out.push_back(&n.expr);
        } else if constexpr (std::is_same_v<T, AssertStmt> ||
                             std::is_same_v<T, IfStmt>) {
          out.push_back(&n.cond);
        } else if constexpr (std::is_same_v<T, ReturnStmt>) {
          if (n.value) out.push_back(&*n.value);
        } else if constexpr (std::is_same_v<T, ForStmt>) {
          out.push_back(&n.iterable);
        }
      },
      stmt.node);
  return out;
}

}  // namespace

std::vector<const Expr*> DirectExprs(const Stmt& stmt) {
  return DirectExprsImpl<const Stmt, const Expr>(stmt);
}

std::vector<Expr*> DirectExprs(Stmt& stmt) {
  return DirectExprsImpl<Stmt, Expr>(stmt);
}

std::vector<std::string> DirectVarUses(const Stmt& stmt) {
  std::vector<std::string> out;
  for (const Expr* e : DirectExprs(stmt)) {
    ForEachExpr(*e, [&](const Expr& sub) {
      if (const auto* v = std::get_if<VarRef>(&sub.node)) {
        out.push_back(v->name);
      }
    });
  }
  return out;
}

std::vector<std::string> CalleesIn(const Block& block) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  ForEachStmt(block, [&](const Stmt& stmt, const StmtPath&) {
    for (const Expr* e : DirectExprs(stmt)) {
      ForEachExpr(*e, [&](const Expr& sub) {
        if (const auto* c = std::get_if<CallExpr>(&sub.node)) {
          if (seen.insert(c->callee).second) out.push_back(c->callee);
        }
      });
    }
  });
  return out;
}

Expr MakeVar(std::string name) { return Expr{VarRef{std::move(name)}, {}}; }

Expr MakeCall(std::string callee, std::vector<Expr> args) {
  return Expr{CallExpr{std::move(callee), std::move(args)}, {}};
}

Expr MakeIndex(Expr target, Expr index) {
  return Expr{IndexExpr{std::move(target), std::move(index)}, {}};
}

Stmt MakeLet(std::string name, Expr value,
             std::vector<std::string> annotations) {
  Stmt s;
  s.annotations = std::move(annotations);
  s.node = LetStmt{std::move(name), std::nullopt, std::move(value)};
  return s;
}

}  // namespace mrlift::testlang
