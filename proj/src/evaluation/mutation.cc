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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "mrlift/evaluation/evaluation.h"
#include "mrlift/testlang/parser.h"
#include "mrlift/testlang/printer.h"
#include "mrlift/util/parallel.h"

namespace mrlift::evaluation {

using testlang::BinaryExpr;
using testlang::BinaryOp;
using testlang::Block;
using testlang::Expr;
using testlang::FuncDef;
using testlang::Program;
using testlang::Stmt;
using testlang::StmtPath;

const char* MutationOperatorName(MutationOperator op) {
  switch (op) {
    case MutationOperator::kAor:
      return "AOR";
    case MutationOperator::kRor:
      return "ROR";
    case MutationOperator::kConstPerturb:
      return "CONST_PERTURB";
    case MutationOperator::kBoolNeg:
      return "BOOL_NEG";
    case MutationOperator::kStmtDel:
      return "STMT_DEL";
    case MutationOperator::kSeeded:
      return "SEEDED";
  }
  return "?";
}

namespace {

constexpr BinaryOp kArith[] = {BinaryOp::kAdd, BinaryOp::kSub, BinaryOp::kMul,
                               BinaryOp::kDiv};
constexpr BinaryOp kRel[] = {BinaryOp::kLt, BinaryOp::kLe, BinaryOp::kGt,
                             BinaryOp::kGe, BinaryOp::kEq, BinaryOp::kNe};

bool IsIn(BinaryOp op, const BinaryOp* first, const BinaryOp* last) {
  return std::find(first, last, op) != last;
}

// Pre-order walk over mutable sub-expressions.
template <typename Fn>
void ForEachExprMut(Expr& expr, Fn&& fn) {
  fn(expr);
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, testlang::ListExpr>) {
          for (Expr& e : n.items) ForEachExprMut(e, fn);
        } else if constexpr (std::is_same_v<T, testlang::CallExpr>) {
          for (Expr& e : n.args) ForEachExprMut(e, fn);
        } else if constexpr (std::is_same_v<T, testlang::IndexExpr>) {
          ForEachExprMut(*n.target, fn);
          ForEachExprMut(*n.index, fn);
        } else if constexpr (std::is_same_v<T, testlang::UnaryExpr>) {
          ForEachExprMut(*n.operand, fn);
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          ForEachExprMut(*n.lhs, fn);
          ForEachExprMut(*n.rhs, fn);
        }
      },
      expr.node);
}

Block* Enclosing(Block& root, const StmtPath& path) {
  Block* block = &root;
  for (size_t i = 0; i + 1 < path.size(); i += 2) {
    Stmt& s = block->stmts[path[i]];
    const int branch = path[i + 1];
    if (auto* f = std::get_if<testlang::IfStmt>(&s.node)) {
      block = branch == 0 ? &f->then_block : &*f->else_block;
    } else {
      block = &std::get<testlang::ForStmt>(s.node).body;
    }
  }
  return block;
}

Stmt& StmtAt(Block& root, const StmtPath& path) {
  return Enclosing(root, path)->stmts[path.back()];
}

// One way to rewrite a node.
struct Variant {
  MutationOperator op;
  std::string what;
  Expr replacement;
};

std::vector<Variant> NodeVariants(const Expr& e, bool is_if_condition) {
  std::vector<Variant> out;
  if (const auto* b = std::get_if<BinaryExpr>(&e.node)) {
    const BinaryOp* first = nullptr;
    const BinaryOp* last = nullptr;
    MutationOperator op = MutationOperator::kAor;
    if (IsIn(b->op, std::begin(kArith), std::end(kArith))) {
      first = std::begin(kArith);
      last = std::end(kArith);
    } else if (IsIn(b->op, std::begin(kRel), std::end(kRel))) {
      first = std::begin(kRel);
      last = std::end(kRel);
      op = MutationOperator::kRor;
    }
    for (const BinaryOp* p = first; p != last; ++p) {
      if (*p == b->op) continue;
      Expr r = e;
      std::get<BinaryExpr>(r.node).op = *p;
      out.push_back({op,
                     absl::StrCat(testlang::BinaryOpText(b->op), " -> ",
                                  testlang::BinaryOpText(*p)),
                     std::move(r)});
    }
  } else if (const auto* i = std::get_if<testlang::IntLit>(&e.node)) {
    std::vector<int64_t> values;
    for (int64_t v : {i->value + 1, i->value - 1, int64_t{0}}) {
      if (v != i->value &&
          std::find(values.begin(), values.end(), v) == values.end()) {
        values.push_back(v);
      }
    }
    for (int64_t v : values) {
      Expr r = e;
      r.node = testlang::IntLit{v};
      out.push_back({MutationOperator::kConstPerturb,
                     absl::StrCat(i->value, " -> ", v), std::move(r)});
    }
  } else if (const auto* bl = std::get_if<testlang::BoolLit>(&e.node)) {
    Expr r = e;
    r.node = testlang::BoolLit{!bl->value};
    out.push_back({MutationOperator::kBoolNeg,
                   bl->value ? "true -> false" : "false -> true", std::move(r)});
  }
  if (is_if_condition) {
    Expr r;
    r.node = testlang::UnaryExpr{testlang::UnaryOp::kNot, e};
    out.push_back({MutationOperator::kBoolNeg, "negate condition", std::move(r)});
  }
  return out;
}

bool Deletable(const Stmt& s) {
  switch (s.kind()) {
    case testlang::StmtKind::kAssign:
    case testlang::StmtKind::kExpr:
    case testlang::StmtKind::kAssert:
    case testlang::StmtKind::kIf:
    case testlang::StmtKind::kFor:
      return true;
    case testlang::StmtKind::kLet:
    case testlang::StmtKind::kReturn:
      return false;
  }
  return false;
}

absl::StatusOr<std::string> Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<Mutant> MutateSut(const runtime::SutRegistry& registry,
                              const std::set<MutationOperator>& ops,
                              int first_id) {
  const Program& original = registry.program();
  std::vector<Mutant> out;
  auto emit = [&](Program mutated, MutationOperator op, MutantLocation loc,
                  std::string what) {
    if (!testlang::CheckProgram(mutated, {}).ok) return;
    Mutant m;
    m.id = first_id + static_cast<int>(out.size());
    m.op = op;
    m.description = absl::StrCat(MutationOperatorName(op), " ", loc.function,
                                 " @", testlang::StmtPathToString(loc.stmt),
                                 ": ", what);
    m.location = std::move(loc);
    m.registry = runtime::SutRegistry(std::move(mutated));
    out.push_back(std::move(m));
  };

  for (size_t f = 0; f < original.functions.size(); ++f) {
    const FuncDef& fn = original.functions[f];
    std::vector<StmtPath> paths;
    testlang::ForEachStmt(fn.body, [&](const Stmt&, const StmtPath& p) {
      paths.push_back(p);
    });
    for (const StmtPath& path : paths) {
      Program probe = original;
      Stmt& stmt = StmtAt(probe.functions[f].body, path);
      const bool is_if = stmt.kind() == testlang::StmtKind::kIf;
      std::vector<Expr*> exprs = testlang::DirectExprs(stmt);
      for (size_t ei = 0; ei < exprs.size(); ++ei) {
        int node = 0;
        std::vector<std::pair<int, Variant>> variants;
        ForEachExprMut(*exprs[ei], [&](Expr& e) {
          for (Variant& v : NodeVariants(e, is_if && ei == 0 && node == 0)) {
            variants.emplace_back(node, std::move(v));
          }
          ++node;
        });
        for (auto& [index, v] : variants) {
          if (!ops.contains(v.op)) continue;
          Program mutated = original;
          Stmt& target = StmtAt(mutated.functions[f].body, path);
          int n = 0;
          ForEachExprMut(*testlang::DirectExprs(target)[ei], [&](Expr& e) {
            if (n++ == index) e = v.replacement;
          });
          emit(std::move(mutated), v.op,
               {fn.name, path, {static_cast<int>(ei), index}}, v.what);
        }
      }
      if (ops.contains(MutationOperator::kStmtDel) && Deletable(stmt)) {
        Program mutated = original;
        Block* block = Enclosing(mutated.functions[f].body, path);
        const std::string text = testlang::PrintStmt(block->stmts[path.back()]);
        block->stmts.erase(block->stmts.begin() + path.back());
        testlang::RenumberStatements(mutated.functions[f].body);
        std::string first_line = text.substr(0, text.find('\n'));
        emit(std::move(mutated), MutationOperator::kStmtDel,
             {fn.name, path, {}}, absl::StrCat("delete `", first_line, "`"));
      }
    }
  }
  return out;
}

absl::StatusOr<std::vector<Mutant>> LoadSeededMutants(const pipeline::Case& c,
                                                      int first_id) {
  namespace fs = std::filesystem;
  std::vector<Mutant> out;
  const fs::path dir = fs::path(c.dir) / "mutants";
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return out;
  std::vector<fs::path> files;
  for (const fs::directory_entry& e : fs::directory_iterator(dir, ec)) {
    if (e.path().extension() == ".mtl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& file : files) {
    absl::StatusOr<std::string> text = Slurp(file);
    if (!text.ok()) return text.status();
    absl::StatusOr<Program> program =
        testlang::ParseProgram(*text, testlang::FuncOrigin::kSut);
    if (!program.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          file.string(), ": ", std::string(program.status().message())));
    }
    if (!testlang::CheckProgram(*program, {}).ok) {
      return absl::InvalidArgumentError(
          absl::StrCat(file.string(), ": does not check"));
    }
    Mutant m;
    m.id = first_id + static_cast<int>(out.size());
    m.op = MutationOperator::kSeeded;
    m.description = absl::StrCat("SEEDED ", file.stem().string());
    for (const FuncDef& f : program->functions) {
      const FuncDef* before = c.registry.Find(f.name);
      if (before == nullptr || !(before->body == f.body) ||
          !(before->params == f.params)) {
        m.location.function = f.name;
        break;
      }
    }
    m.registry = runtime::SutRegistry(*std::move(program));
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

struct Run {
  runtime::ExecStatus status = runtime::ExecStatus::kOk;
  runtime::Bindings bindings;
};

Run RunTest(const TestBlock& t, const runtime::SutRegistry& registry,
            const runtime::Limits& limits,
            std::set<std::string>* covered = nullptr,
            std::string* error = nullptr) {
  runtime::ExecutionOutcome out =
      runtime::Execute(t.body, {}, registry, limits, &t.functions);
  if (covered != nullptr) {
    for (const auto& [callee, hits] : out.coverage.functions) {
      if (!callee.starts_with("sut.")) continue;
      for (const auto& [path, count] : hits) {
        if (count > 0) {
          covered->insert(absl::StrCat(callee.substr(4), ":",
                                       testlang::StmtPathToString(path)));
        }
      }
    }
  }
  if (error != nullptr && out.error) *error = *out.error;
  return {out.status, std::move(out.bindings)};
}

}  // namespace

absl::StatusOr<AdequacyComparison> RunMutationTesting(
    const runtime::SutRegistry& original, const std::vector<Suite>& suites,
    const std::vector<Mutant>& mutants,
    const std::map<std::string, std::vector<std::string>>& combos,
    const runtime::Limits& limits, int parallelism) {
  AdequacyComparison result;
  result.combos = combos;
  result.generated = static_cast<int>(mutants.size());
  for (const FuncDef& fn : original.program().functions) {
    testlang::ForEachStmt(fn.body, [&](const Stmt&, const StmtPath&) {
      ++result.sut_statements;
    });
  }

  // Sanity gate on the unmutated SUT.
  std::map<std::string, std::set<std::string>> covered_by_suite;
  std::map<std::string, std::vector<Run>> baseline;
  for (const Suite& s : suites) {
    std::set<std::string>& covered = covered_by_suite[s.name];
    for (const TestBlock& t : s.tests) {
      std::string error;
      Run r = RunTest(t, original, limits, &covered, &error);
      if (r.status != runtime::ExecStatus::kOk) {
        return absl::FailedPreconditionError(absl::StrCat(
            "suite ", s.name, ": test ", t.name, " fails on the original SUT (",
            runtime::ExecStatusName(r.status),
            error.empty() ? "" : absl::StrCat(": ", error), ")"));
      }
      baseline[s.name].push_back(std::move(r));
    }
  }

  struct MutantRuns {
    std::map<std::string, std::vector<bool>> killed;
    bool same_everywhere = true;
  };
  std::vector<MutantRuns> runs(mutants.size());
  ParallelFor(static_cast<int>(mutants.size()), parallelism, [&](int i) {
    MutantRuns& mr = runs[i];
    for (const Suite& s : suites) {
      std::vector<bool>& flags = mr.killed[s.name];
      for (size_t t = 0; t < s.tests.size(); ++t) {
        Run r = RunTest(s.tests[t], mutants[i].registry, limits);
        flags.push_back(r.status != runtime::ExecStatus::kOk);
        const Run& base = baseline.at(s.name)[t];
        if (r.status != base.status ||
            !runtime::BindingsEq(r.bindings, base.bindings)) {
          mr.same_everywhere = false;
        }
      }
    }
  });

  std::map<std::string, std::set<int>> killed_by_suite;
  for (size_t i = 0; i < mutants.size(); ++i) {
    const int id = mutants[i].id;
    result.matrix[id] = runs[i].killed;
    if (runs[i].same_everywhere) result.equivalent.insert(id);
    for (const auto& [suite, flags] : runs[i].killed) {
      killed_by_suite[suite];
      if (std::find(flags.begin(), flags.end(), true) != flags.end()) {
        killed_by_suite[suite].insert(id);
      }
    }
  }
  result.killed_by_suite = killed_by_suite;

  const int denominator =
      result.generated - static_cast<int>(result.equivalent.size());
  for (const auto& [combo, members] : combos) {
    std::set<int>& killed = result.killed[combo];
    std::set<std::string>& covered = result.covered[combo];
    for (const std::string& s : members) {
      killed.insert(killed_by_suite[s].begin(), killed_by_suite[s].end());
      covered.insert(covered_by_suite[s].begin(), covered_by_suite[s].end());
    }
    result.mutation_score[combo] =
        denominator > 0 ? static_cast<double>(killed.size()) / denominator : 0.0;
    result.line_coverage[combo] =
        result.sut_statements > 0
            ? static_cast<double>(covered.size()) / result.sut_statements
            : 0.0;
  }
  return result;
}

}  // namespace mrlift::evaluation
