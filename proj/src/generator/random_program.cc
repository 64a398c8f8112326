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

#include <random>

#include "absl/strings/str_cat.h"
#include "mrlift/generator/generator.h"
#include "mrlift/testlang/builtins.h"

namespace mrlift::generator {

using testlang::Block;
using testlang::Expr;
using testlang::Stmt;

namespace {

class ProgramGen {
 public:
  explicit ProgramGen(uint64_t seed) : rng_(seed) {}

  testlang::Program Build() {
    testlang::Program p;
    const int nf = Pick(0, 3);
    for (int i = 0; i < nf; ++i) p.functions.push_back(Function(i));
    const int nt = Pick(0, 2);
    for (int i = 0; i < nt; ++i) {
      testlang::TestDef t;
      t.name = absl::StrCat("t", i, "_", Name());
      if (Chance(0.2)) t.annotations.push_back("slow");
      t.body = Body(0, false);
      p.tests.push_back(std::move(t));
    }
    return p;
  }

 private:
  int Pick(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  bool Chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::string Name() {
    static const char* kNames[] = {"a", "b", "value", "xs", "date_a", "n",
                                   "acc", "item", "s1", "_tmp", "Result", "k9"};
    return kNames[Pick(0, 11)];
  }

  testlang::TypeAnn Type(int depth = 0) {
    static const char* kTypes[] = {"int", "float", "str", "bool", "list"};
    testlang::TypeAnn t{kTypes[Pick(0, 4)], {}};
    if (t.name == "list" && depth < 2 && Chance(0.5)) {
      t.args.push_back(Type(depth + 1));
    }
    return t;
  }

  std::string Text() {
    static const char* kPieces[] = {"abc", " ", "2024-01-01", "\n", "\t",
                                    "\"q\"", "\\", "x y", "", "#[no]"};
    std::string s;
    const int n = Pick(0, 3);
    for (int i = 0; i < n; ++i) s += kPieces[Pick(0, 9)];
    return s;
  }

  Expr Atom() {
    switch (Pick(0, 6)) {
      case 0:
        return Expr{testlang::IntLit{Pick(0, 1000)}};
      case 1: {
        static const double kFloats[] = {0.0, 0.5, 1.25, 3.0, 1e-7, 2.5e10,
                                         0.1};
        return Expr{testlang::FloatLit{kFloats[Pick(0, 6)]}};
      }
      case 2:
        return Expr{testlang::StrLit{Text()}};
      case 3:
        return Expr{testlang::BoolLit{Chance(0.5)}};
      case 4:
        return Expr{testlang::UnitLit{}};
      default:
        return testlang::MakeVar(Name());
    }
  }

  Expr Expression(int depth) {
    if (depth >= 3 || Chance(0.3)) return Atom();
    switch (Pick(0, 5)) {
      case 0: {
        std::vector<Expr> items;
        const int n = Pick(0, 3);
        for (int i = 0; i < n; ++i) items.push_back(Expression(depth + 1));
        return Expr{testlang::ListExpr{std::move(items)}};
      }
      case 1: {
        const auto& all = testlang::AllBuiltins();
        std::string callee =
            Chance(0.5) ? std::string(all[Pick(0, all.size() - 1)].name)
                        : (Chance(0.5) ? absl::StrCat(
                                             std::string(testlang::kSutPrefix),
                                             Name())
                                       : Name());
        std::vector<Expr> args;
        const int n = Pick(0, 3);
        for (int i = 0; i < n; ++i) args.push_back(Expression(depth + 1));
        return testlang::MakeCall(std::move(callee), std::move(args));
      }
      case 2:
        return testlang::MakeIndex(Expression(depth + 1), Expression(depth + 1));
      case 3:
        return Expr{testlang::UnaryExpr{
            Chance(0.5) ? testlang::UnaryOp::kNeg : testlang::UnaryOp::kNot,
            Expression(depth + 1)}};
      default:
        return Expr{testlang::BinaryExpr{
            static_cast<testlang::BinaryOp>(Pick(0, 12)), Expression(depth + 1),
            Expression(depth + 1)}};
    }
  }

  Stmt Statement(int depth, bool in_function) {
    Stmt s;
    if (Chance(0.1)) s.annotations.push_back(Chance(0.5) ? "source" : "followup");
    const int kind = Pick(0, depth >= 2 ? 4 : 6);
    switch (kind) {
      case 0: {
        testlang::LetStmt let{Name(), std::nullopt, Expression(0)};
        if (Chance(0.3)) let.type = Type();
        s.node = std::move(let);
        break;
      }
      case 1:
        s.node = testlang::AssignStmt{Name(), Expression(0)};
        break;
      case 2:
        s.node = testlang::ExprStmt{Expression(0)};
        break;
      case 3:
        s.node = testlang::AssertStmt{Expression(0)};
        break;
      case 4:
        if (in_function) {
          s.node = testlang::ReturnStmt{
              Chance(0.8) ? std::optional<Expr>(Expression(0)) : std::nullopt};
        } else {
          s.node = testlang::AssertStmt{Expression(0)};
        }
        break;
      case 5: {
        testlang::IfStmt branch;
        branch.cond = Expression(0);
        branch.then_block = Body(depth + 1, in_function);
        if (Chance(0.5)) branch.else_block = Body(depth + 1, in_function);
        s.node = std::move(branch);
        break;
      }
      default:
        s.node = testlang::ForStmt{Name(), Expression(0),
                                   Body(depth + 1, in_function)};
        break;
    }
    return s;
  }

  Block Body(int depth, bool in_function) {
    Block b;
    const int n = Pick(0, depth == 0 ? 6 : 3);
    for (int i = 0; i < n; ++i) b.stmts.push_back(Statement(depth, in_function));
    testlang::RenumberStatements(b);
    return b;
  }

  testlang::FuncDef Function(int index) {
    testlang::FuncDef fn;
    fn.name = absl::StrCat("f", index, "_", Name());
    const int np = Pick(0, 3);
    for (int i = 0; i < np; ++i) {
      testlang::Param p{absl::StrCat("p", i), std::nullopt};
      if (Chance(0.3)) p.type = Type();
      fn.params.push_back(std::move(p));
    }
    if (Chance(0.3)) fn.return_type = Type();
    const int origin = Pick(0, 2);
    fn.origin = static_cast<testlang::FuncOrigin>(origin);
    if (fn.origin == testlang::FuncOrigin::kSut) fn.annotations.push_back("sut");
    if (fn.origin == testlang::FuncOrigin::kTransformation) {
      fn.annotations.push_back("transformation");
    }
    fn.body = Body(0, true);
    return fn;
  }

  std::mt19937_64 rng_;
};

}  // namespace

testlang::Program RandomProgram(uint64_t seed) {
  return ProgramGen(seed).Build();
}

}  // namespace mrlift::generator
