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

#include "mrlift/testlang/printer.h"

#include <charconv>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace mrlift::testlang {
namespace {

constexpr int kIndentWidth = 4;
// Unary and postfix forms bind tighter than any binary operator.
constexpr int kUnaryPrecedence = 7;
constexpr int kAtomPrecedence = 8;

int ExprPrecedence(const Expr& e) {
  if (const auto* b = std::get_if<BinaryExpr>(&e.node)) {
    return Precedence(b->op);
  }
  if (std::holds_alternative<UnaryExpr>(e.node)) return kUnaryPrecedence;
  return kAtomPrecedence;
}

std::string Wrap(const Expr& e, bool parens) {
  std::string text = PrintExpr(e);
  return parens ? absl::StrCat("(", text, ")") : text;
}

std::string Pad(int indent) {
  return std::string(static_cast<size_t>(indent * kIndentWidth), ' ');
}

std::string AnnotationPrefix(const std::vector<std::string>& annotations) {
  std::string out;
  for (const std::string& a : annotations) absl::StrAppend(&out, "#[", a, "] ");
  return out;
}

std::string PrintBraced(const Block& block, int indent) {
  return absl::StrCat("{\n", PrintStatements(block, indent + 1), Pad(indent),
                      "}");
}

bool IsBareIf(const Block& block) {
  return block.stmts.size() == 1 &&
         std::holds_alternative<IfStmt>(block.stmts[0].node) &&
         block.stmts[0].annotations.empty();
}

std::string PrintIfTail(const IfStmt& s, int indent) {
  std::string out = absl::StrCat("if ", PrintExpr(s.cond), " ",
                                 PrintBraced(s.then_block, indent));
  if (s.else_block) {
    if (IsBareIf(*s.else_block)) {
      absl::StrAppend(
          &out, " else ",
          PrintIfTail(std::get<IfStmt>(s.else_block->stmts[0].node), indent));
    } else {
      absl::StrAppend(&out, " else ", PrintBraced(*s.else_block, indent));
    }
  }
  return out;
}

}  // namespace

std::string FormatFloat(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  std::string text(buf, ptr);
  if (text.find_first_of(".eEn") == std::string::npos) text += ".0";
  return text;
}

std::string PrintType(const TypeAnn& type) {
  if (type.args.empty()) return type.name;
  std::vector<std::string> args;
  for (const TypeAnn& a : type.args) args.push_back(PrintType(a));
  return absl::StrCat(type.name, "<", absl::StrJoin(args, ", "), ">");
}

std::string PrintExpr(const Expr& expr) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          return absl::StrCat(n.value);
        } else if constexpr (std::is_same_v<T, FloatLit>) {
          return FormatFloat(n.value);
        } else if constexpr (std::is_same_v<T, StrLit>) {
          return EscapeStringLiteral(n.value);
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          return n.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, UnitLit>) {
          return "unit";
        } else if constexpr (std::is_same_v<T, VarRef>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, ListExpr>) {
          std::vector<std::string> items;
          for (const Expr& e : n.items) items.push_back(PrintExpr(e));
          return absl::StrCat("[", absl::StrJoin(items, ", "), "]");
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          std::vector<std::string> args;
          for (const Expr& e : n.args) args.push_back(PrintExpr(e));
          return absl::StrCat(n.callee, "(", absl::StrJoin(args, ", "), ")");
        } else if constexpr (std::is_same_v<T, IndexExpr>) {
          return absl::StrCat(
              Wrap(*n.target, ExprPrecedence(*n.target) < kAtomPrecedence),
              "[", PrintExpr(*n.index), "]");
        } else if constexpr (std::is_same_v<T, UnaryExpr>) {
          return absl::StrCat(
              UnaryOpText(n.op),
              Wrap(*n.operand, ExprPrecedence(*n.operand) < kUnaryPrecedence));
        } else {
          const int prec = Precedence(n.op);
          return absl::StrCat(Wrap(*n.lhs, ExprPrecedence(*n.lhs) < prec), " ",
                              BinaryOpText(n.op), " ",
                              Wrap(*n.rhs, ExprPrecedence(*n.rhs) <= prec));
        }
      },
      expr.node);
}

std::string PrintStmt(const Stmt& stmt, int indent) {
  std::string body = std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LetStmt>) {
          std::string type =
              n.type ? absl::StrCat(": ", PrintType(*n.type)) : "";
          return absl::StrCat("let ", n.name, type, " = ", PrintExpr(n.value),
                              ";");
        } else if constexpr (std::is_same_v<T, AssignStmt>) {
          return absl::StrCat(n.name, " = ", PrintExpr(n.value), ";");
        } else if constexpr (std::is_same_v<T, ExprStmt>) {
          return absl::StrCat(PrintExpr(n.expr), ";");
        } else if constexpr (std::is_same_v<T, AssertStmt>) {
          return absl::StrCat("assert ", PrintExpr(n.cond), ";");
        } else if constexpr (std::is_same_v<T, ReturnStmt>) {
          return n.value ? absl::StrCat("return ", PrintExpr(*n.value), ";")
                         : std::string("return;");
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          return PrintIfTail(n, indent);
        } else {
          return absl::StrCat("for ", n.var, " in ", PrintExpr(n.iterable),
                              " ", PrintBraced(n.body, indent));
        }
      },
      stmt.node);
  return absl::StrCat(Pad(indent), AnnotationPrefix(stmt.annotations), body,
                      "\n");
}

std::string PrintStatements(const Block& block, int indent) {
  std::string out;
  for (const Stmt& s : block.stmts) absl::StrAppend(&out, PrintStmt(s, indent));
  return out;
}

std::string PrintFunction(const FuncDef& fn) {
  std::vector<std::string> params;
  for (const Param& p : fn.params) {
    params.push_back(p.type ? absl::StrCat(p.name, ": ", PrintType(*p.type))
                            : p.name);
  }
  std::string ret =
      fn.return_type ? absl::StrCat(" -> ", PrintType(*fn.return_type)) : "";
  return absl::StrCat(AnnotationPrefix(fn.annotations), "fn ", fn.name, "(",
                      absl::StrJoin(params, ", "), ")", ret, " ",
                      PrintBraced(fn.body, 0), "\n");
}

std::string PrintTest(const TestDef& test) {
  return absl::StrCat(AnnotationPrefix(test.annotations), "test ", test.name,
                      " ", PrintBraced(test.body, 0), "\n");
}

std::string PrintProgram(const Program& program) {
  std::vector<std::string> items;
  for (const FuncDef& f : program.functions) items.push_back(PrintFunction(f));
  for (const TestDef& t : program.tests) items.push_back(PrintTest(t));
  return absl::StrJoin(items, "\n");
}

}  // namespace mrlift::testlang
