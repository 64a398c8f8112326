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

#ifndef MRLIFT_TESTLANG_AST_H_
#define MRLIFT_TESTLANG_AST_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mrlift/testlang/token.h"
#include "mrlift/util/box.h"

namespace mrlift::testlang {

// AST for MTL. All nodes are regular value types: copying deep-copies, and
// operator== is structural (spans are ignored, see Span).

struct Expr;
struct Stmt;

enum class UnaryOp { kNeg, kNot };

enum class BinaryOp {
  kOr,
  kAnd,
  kEq,
  kNe,
  kLt,
  kLe,
  kGt,
  kGe,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kMod,
};

const char* UnaryOpText(UnaryOp op);
const char* BinaryOpText(BinaryOp op);
// Binding strength; higher binds tighter. All binary operators are
// left-associative.
int Precedence(BinaryOp op);

struct IntLit {
  int64_t value = 0;
  friend bool operator==(const IntLit&, const IntLit&) = default;
};

struct FloatLit {
  double value = 0.0;
  friend bool operator==(const FloatLit&, const FloatLit&) = default;
};

struct StrLit {
  std::string value;
  friend bool operator==(const StrLit&, const StrLit&) = default;
};

struct BoolLit {
  bool value = false;
  friend bool operator==(const BoolLit&, const BoolLit&) = default;
};

struct UnitLit {
  friend bool operator==(const UnitLit&, const UnitLit&) = default;
};

struct VarRef {
  std::string name;
  friend bool operator==(const VarRef&, const VarRef&) = default;
};

struct ListExpr {
  std::vector<Expr> items;
  friend bool operator==(const ListExpr&, const ListExpr&);
};

// `callee` is a plain name (`len`, `plus_one_day`) or a dotted path
// (`sut.to_medium_date`). Only the `sut.` prefix resolves; any other dotted
// path is an unresolved name.
struct CallExpr {
  std::string callee;
  std::vector<Expr> args;
  friend bool operator==(const CallExpr&, const CallExpr&);
};

struct IndexExpr {
  Box<Expr> target;
  Box<Expr> index;
  friend bool operator==(const IndexExpr&, const IndexExpr&);
};

struct UnaryExpr {
  UnaryOp op = UnaryOp::kNeg;
  Box<Expr> operand;
  friend bool operator==(const UnaryExpr&, const UnaryExpr&);
};

struct BinaryExpr {
  BinaryOp op = BinaryOp::kAdd;
  Box<Expr> lhs;
  Box<Expr> rhs;
  friend bool operator==(const BinaryExpr&, const BinaryExpr&);
};

struct Expr {
  using Node = std::variant<IntLit, FloatLit, StrLit, BoolLit, UnitLit, VarRef,
                            ListExpr, CallExpr, IndexExpr, UnaryExpr,
                            BinaryExpr>;
  Node node;
  Span span;

  friend bool operator==(const Expr&, const Expr&) = default;
};

struct TypeAnn {
  std::string name;
  std::vector<TypeAnn> args;
  friend bool operator==(const TypeAnn&, const TypeAnn&) = default;
};

struct Block {
  std::vector<Stmt> stmts;
  friend bool operator==(const Block&, const Block&);
};

enum class StmtKind { kLet, kAssign, kExpr, kAssert, kReturn, kIf, kFor };

const char* StmtKindName(StmtKind kind);

struct LetStmt {
  std::string name;
  std::optional<TypeAnn> type;
  Expr value;
  friend bool operator==(const LetStmt&, const LetStmt&) = default;
};

struct AssignStmt {
  std::string name;
  Expr value;
  friend bool operator==(const AssignStmt&, const AssignStmt&) = default;
};

struct ExprStmt {
  Expr expr;
  friend bool operator==(const ExprStmt&, const ExprStmt&) = default;
};

struct AssertStmt {
  Expr cond;
  friend bool operator==(const AssertStmt&, const AssertStmt&) = default;
};

struct ReturnStmt {
  std::optional<Expr> value;
  friend bool operator==(const ReturnStmt&, const ReturnStmt&) = default;
};

struct IfStmt {
  Expr cond;
  Block then_block;
  std::optional<Block> else_block;
  friend bool operator==(const IfStmt&, const IfStmt&) = default;
};

struct ForStmt {
  std::string var;
  Expr iterable;
  Block body;
  friend bool operator==(const ForStmt&, const ForStmt&) = default;
};

struct Stmt {
  using Node = std::variant<LetStmt, AssignStmt, ExprStmt, AssertStmt,
                            ReturnStmt, IfStmt, ForStmt>;
  // Dense per block: 0..n-1 in textual order.
  int id = 0;
  std::vector<std::string> annotations;
  Node node;
  Span span;

  StmtKind kind() const { return static_cast<StmtKind>(node.index()); }
  bool HasAnnotation(std::string_view name) const;

  friend bool operator==(const Stmt&, const Stmt&) = default;
};

enum class FuncOrigin { kSut, kHelper, kTransformation };

const char* FuncOriginName(FuncOrigin origin);

struct Param {
  std::string name;
  std::optional<TypeAnn> type;
  friend bool operator==(const Param&, const Param&) = default;
};

struct FuncDef {
  std::string name;
  std::vector<Param> params;
  std::optional<TypeAnn> return_type;
  Block body;
  FuncOrigin origin = FuncOrigin::kHelper;
  std::vector<std::string> annotations;
  Span span;

  friend bool operator==(const FuncDef&, const FuncDef&) = default;
};

struct TestDef {
  std::string name;
  std::vector<std::string> annotations;
  Block body;
  Span span;

  bool HasAnnotation(std::string_view name) const;
  friend bool operator==(const TestDef&, const TestDef&) = default;
};

struct Program {
  std::vector<FuncDef> functions;
  std::vector<TestDef> tests;

  const FuncDef* FindFunction(std::string_view name) const;
  const TestDef* FindTest(std::string_view name) const;

  friend bool operator==(const Program&, const Program&) = default;
};

// Reassigns statement ids to 0..n-1 in textual order in every nested block.
void RenumberStatements(Block& block);

// Path from a root block to a (possibly nested) statement: the top-level id,
// then (branch, id) pairs. Branch 0 is the IF then-block or FOR body; branch
// 1 is the IF else-block.
using StmtPath = std::vector<int>;

std::string StmtPathToString(const StmtPath& path);

// Visits every statement in pre-order with its path.
template <typename Fn>
void ForEachStmt(const Block& block, Fn&& fn, StmtPath prefix = {}) {
  for (const Stmt& stmt : block.stmts) {
    StmtPath path = prefix;
    path.push_back(stmt.id);
    fn(stmt, path);
    if (const auto* s = std::get_if<IfStmt>(&stmt.node)) {
      StmtPath p0 = path;
      p0.push_back(0);
      ForEachStmt(s->then_block, fn, p0);
      if (s->else_block) {
        StmtPath p1 = path;
        p1.push_back(1);
        ForEachStmt(*s->else_block, fn, p1);
      }
    } else if (const auto* f = std::get_if<ForStmt>(&stmt.node)) {
      StmtPath p0 = path;
      p0.push_back(0);
      ForEachStmt(f->body, fn, p0);
    }
  }
}

// Visits `expr` and all sub-expressions in pre-order.
template <typename Fn>
void ForEachExpr(const Expr& expr, Fn&& fn) {
  fn(expr);
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ListExpr>) {
          for (const Expr& e : n.items) ForEachExpr(e, fn);
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          for (const Expr& e : n.args) ForEachExpr(e, fn);
        } else if constexpr (std::is_same_v<T, IndexExpr>) {
          ForEachExpr(*n.target, fn);
          ForEachExpr(*n.index, fn);
        } else if constexpr (std::is_same_v<T, UnaryExpr>) {
          ForEachExpr(*n.operand, fn);
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          ForEachExpr(*n.lhs, fn);
          ForEachExpr(*n.rhs, fn);
        }
      },
      expr.node);
}

// Expressions owned directly by a statement (not by nested blocks).
std::vector<const Expr*> DirectExprs(const Stmt& stmt);
std::vector<Expr*> DirectExprs(Stmt& stmt);

// Names read by the statement's own expressions (not nested blocks).
std::vector<std::string> DirectVarUses(const Stmt& stmt);

// Callee names appearing anywhere in the expressions of `block`.
std::vector<std::string> CalleesIn(const Block& block);

// Convenience constructors.
Expr MakeVar(std::string name);
Expr MakeCall(std::string callee, std::vector<Expr> args);
Expr MakeIndex(Expr target, Expr index);
Stmt MakeLet(std::string name, Expr value,
             std::vector<std::string> annotations = {});

}  // namespace mrlift::testlang

#endif  // MRLIFT_TESTLANG_AST_H_
