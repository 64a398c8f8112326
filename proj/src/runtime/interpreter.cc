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

#include "mrlift/runtime/interpreter.h"

#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mrlift/runtime/builtins.h"
#include "mrlift/testlang/builtins.h"

namespace mrlift::runtime {

using testlang::BinaryOp;
using testlang::Block;
using testlang::Expr;
using testlang::FuncDef;
using testlang::Program;
using testlang::Stmt;
using testlang::StmtPath;

const char* ExecStatusName(ExecStatus status) {
  switch (status) {
    case ExecStatus::kOk: return "OK";
    case ExecStatus::kAssertFail: return "ASSERT_FAIL";
    case ExecStatus::kRuntimeError: return "RUNTIME_ERROR";
    case ExecStatus::kStepLimit: return "STEP_LIMIT";
  }
  return "?";
}

SutRegistry::SutRegistry(Program program)
    : program_(std::make_shared<Program>(std::move(program))) {
  for (const FuncDef& fn : program_->functions) {
    signatures_.emplace(fn.name, static_cast<int>(fn.params.size()));
  }
}

namespace {

struct StepLimitHit {};
struct AssertFailed {
  std::string where;
};

// One activation: lexical scopes plus the program that plain callees resolve
// against and the coverage map of the running body.
struct Frame {
  std::vector<Bindings> scopes;
  const Program* module = nullptr;
  HitCounts* coverage = nullptr;
  std::string name;
};

enum class Flow { kNormal, kReturn };

class Interpreter {
 public:
  Interpreter(const SutRegistry& registry, const Limits& limits,
              const Environment& env)
      : registry_(registry), limits_(limits) {
    state_.clock = env.clock_start;
    state_.rng = env.seed;
    state_.max_value_size = limits.max_value_size;
    state_.charge = [this](int64_t n) { Charge(n); };
  }

  int64_t steps() const { return steps_; }
  Coverage& coverage() { return coverage_; }

  // Runs a test body; the outermost scope is returned through `frame`.
  Flow RunBlock(const Block& block, Frame& frame, const StmtPath& prefix,
                bool top_level) {
    for (const Stmt& stmt : block.stmts) {
      StmtPath path = prefix;
      path.push_back(stmt.id);
      if (top_level) current_top_ = path;
      Charge(1);
      ++(*frame.coverage)[path];
      if (ExecStmt(stmt, frame, path) == Flow::kReturn) return Flow::kReturn;
    }
    return Flow::kNormal;
  }

  Value Call(const FuncDef& fn, const std::vector<Value>& args,
             const Program* module, const std::string& coverage_key) {
    if (args.size() != fn.params.size()) {
      throw RuntimeFault(absl::StrFormat(
          "arity mismatch: '%s' expects %d argument(s), got %d", fn.name,
          fn.params.size(), args.size()));
    }
    if (depth_ >= std::min(limits_.max_call_depth, kCallDepthCeiling)) {
      throw RuntimeFault("maximum call depth exceeded");
    }
    Charge(1);
    ++depth_;
    Frame frame;
    frame.module = module;
    frame.coverage = &coverage_.functions[coverage_key];
    frame.name = fn.name;
    frame.scopes.emplace_back();
    for (size_t i = 0; i < args.size(); ++i) {
      frame.scopes.back()[fn.params[i].name] = args[i];
    }
    return_value_.reset();
    const Flow flow = RunBlock(fn.body, frame, {}, false);
    --depth_;
    Value out;
    if (flow == Flow::kReturn && return_value_) out = std::move(*return_value_);
    return_value_.reset();
    return out;
  }

  const StmtPath& current_top() const { return current_top_; }

 private:
  void Charge(int64_t n) {
    if (n > limits_.max_steps - steps_) {
      steps_ = limits_.max_steps;
      throw StepLimitHit{};
    }
    steps_ += n;
  }

  static Value* Find(Frame& frame, const std::string& name) {
    for (auto it = frame.scopes.rbegin(); it != frame.scopes.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) return &found->second;
    }
    return nullptr;
  }

  void CheckSize(const Value& v) {
    size_t n = 0;
    if (v.is_str()) n = v.as_str().size();
    if (v.is_list()) n = v.as_list().size();
    if (static_cast<int64_t>(n) > limits_.max_value_size) {
      throw RuntimeFault("value exceeds the maximum size");
    }
  }

  Flow ExecStmt(const Stmt& stmt, Frame& frame, const StmtPath& path) {
    return std::visit(
        [&](const auto& n) -> Flow {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, testlang::LetStmt>) {
            Value v = Eval(n.value, frame);
            frame.scopes.back()[n.name] = std::move(v);
          } else if constexpr (std::is_same_v<T, testlang::AssignStmt>) {
            Value v = Eval(n.value, frame);
            Value* slot = Find(frame, n.name);
            if (slot == nullptr) {
              throw RuntimeFault(
                  absl::StrCat("assignment to undeclared variable '", n.name,
                               "'"));
            }
            *slot = std::move(v);
          } else if constexpr (std::is_same_v<T, testlang::ExprStmt>) {
            Eval(n.expr, frame);
          } else if constexpr (std::is_same_v<T, testlang::AssertStmt>) {
            Value v = Eval(n.cond, frame);
            if (!v.is_bool()) {
              throw RuntimeFault(absl::StrCat(
                  "assert condition is ", TypeName(v), ", not bool"));
            }
            if (!v.as_bool()) {
              throw AssertFailed{absl::StrCat(
                  frame.name.empty() ? "" : absl::StrCat("fn ", frame.name,
                                                         " "),
                  "statement ", testlang::StmtPathToString(path))};
            }
          } else if constexpr (std::is_same_v<T, testlang::ReturnStmt>) {
            return_value_ = n.value ? Eval(*n.value, frame) : Value();
            return Flow::kReturn;
          } else if constexpr (std::is_same_v<T, testlang::IfStmt>) {
            Value c = Eval(n.cond, frame);
            if (!c.is_bool()) {
              throw RuntimeFault(absl::StrCat("if condition is ", TypeName(c),
                                              ", not bool"));
            }
            const Block* branch = nullptr;
            int branch_id = 0;
            if (c.as_bool()) {
              branch = &n.then_block;
            } else if (n.else_block) {
              branch = &*n.else_block;
              branch_id = 1;
            }
            if (branch != nullptr) {
              StmtPath sub = path;
              sub.push_back(branch_id);
              frame.scopes.emplace_back();
              const Flow flow = RunBlock(*branch, frame, sub, false);
              frame.scopes.pop_back();
              return flow;
            }
          } else {
            Value it = Eval(n.iterable, frame);
            ValueList items;
            if (it.is_list()) {
              items = it.as_list();
            } else if (it.is_str()) {
              for (char ch : it.as_str()) items.emplace_back(std::string(1, ch));
            } else {
              throw RuntimeFault(absl::StrCat("cannot iterate over ",
                                              TypeName(it)));
            }
            StmtPath sub = path;
            sub.push_back(0);
            for (Value& item : items) {
              Charge(1);
              frame.scopes.emplace_back();
              frame.scopes.back()[n.var] = std::move(item);
              const Flow flow = RunBlock(n.body, frame, sub, false);
              frame.scopes.pop_back();
              if (flow == Flow::kReturn) return flow;
            }
          }
          return Flow::kNormal;
        },
        stmt.node);
  }

  Value Eval(const Expr& expr, Frame& frame) {
    return std::visit(
        [&](const auto& n) -> Value {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, testlang::IntLit>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, testlang::FloatLit>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, testlang::StrLit>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, testlang::BoolLit>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, testlang::UnitLit>) {
            return Unit{};
          } else if constexpr (std::is_same_v<T, testlang::VarRef>) {
            Value* v = Find(frame, n.name);
            if (v == nullptr) {
              throw RuntimeFault(
                  absl::StrCat("unresolved name '", n.name, "'"));
            }
            return *v;
          } else if constexpr (std::is_same_v<T, testlang::ListExpr>) {
            ValueList items;
            items.reserve(n.items.size());
            for (const Expr& e : n.items) items.push_back(Eval(e, frame));
            return items;
          } else if constexpr (std::is_same_v<T, testlang::CallExpr>) {
            return EvalCall(n, frame);
          } else if constexpr (std::is_same_v<T, testlang::IndexExpr>) {
            return EvalIndex(Eval(*n.target, frame), Eval(*n.index, frame));
          } else if constexpr (std::is_same_v<T, testlang::UnaryExpr>) {
            Value v = Eval(*n.operand, frame);
            if (n.op == testlang::UnaryOp::kNot) {
              if (!v.is_bool()) {
                throw RuntimeFault(absl::StrCat("'!' applied to ",
                                                TypeName(v)));
              }
              return !v.as_bool();
            }
            if (v.is_int()) {
              if (v.as_int() == std::numeric_limits<int64_t>::min()) {
                throw RuntimeFault("integer overflow");
              }
              return -v.as_int();
            }
            if (v.is_float()) return -v.as_float();
            throw RuntimeFault(absl::StrCat("'-' applied to ", TypeName(v)));
          } else {
            return EvalBinary(n, frame);
          }
        },
        expr.node);
  }

  Value EvalCall(const testlang::CallExpr& call, Frame& frame) {
    std::vector<Value> args;
    args.reserve(call.args.size());
    for (const Expr& e : call.args) args.push_back(Eval(e, frame));

    if (call.callee.starts_with(testlang::kSutPrefix)) {
      const std::string name = call.callee.substr(testlang::kSutPrefix.size());
      const FuncDef* fn = registry_.Find(name);
      if (fn == nullptr) {
        throw RuntimeFault(absl::StrCat("unresolved name '", call.callee,
                                        "'"));
      }
      return Call(*fn, args, &registry_.program(), call.callee);
    }
    if (frame.module != nullptr) {
      if (const FuncDef* fn = frame.module->FindFunction(call.callee)) {
        const std::string key = frame.module == &registry_.program()
                                    ? absl::StrCat(std::string(testlang::kSutPrefix),
                                                   call.callee)
                                    : call.callee;
        return Call(*fn, args, frame.module, key);
      }
    }
    const testlang::BuiltinInfo* info = testlang::FindBuiltin(call.callee);
    if (info == nullptr) {
      throw RuntimeFault(absl::StrCat("unresolved name '", call.callee, "'"));
    }
    if (static_cast<int>(args.size()) != info->arity) {
      throw RuntimeFault(absl::StrFormat(
          "arity mismatch: '%s' expects %d argument(s), got %d", call.callee,
          info->arity, args.size()));
    }
    Charge(1);
    Value out = CallBuiltin(call.callee, args, state_);
    CheckSize(out);
    return out;
  }

  static Value EvalIndex(const Value& target, const Value& index) {
    if (!index.is_int()) {
      throw RuntimeFault(absl::StrCat("index must be int, got ",
                                      TypeName(index)));
    }
    const int64_t i = index.as_int();
    int64_t size = 0;
    if (target.is_list()) {
      size = static_cast<int64_t>(target.as_list().size());
    } else if (target.is_str()) {
      size = static_cast<int64_t>(target.as_str().size());
    } else {
      throw RuntimeFault(absl::StrCat("cannot index ", TypeName(target)));
    }
    if (i < 0 || i >= size) {
      throw RuntimeFault(absl::StrFormat(
          "index %d out of range for length %d", i, size));
    }
    if (target.is_list()) return target.as_list()[static_cast<size_t>(i)];
    return std::string(1, target.as_str()[static_cast<size_t>(i)]);
  }

  Value EvalBinary(const testlang::BinaryExpr& b, Frame& frame) {
    if (b.op == BinaryOp::kAnd || b.op == BinaryOp::kOr) {
      Value lhs = Eval(*b.lhs, frame);
      if (!lhs.is_bool()) {
        throw RuntimeFault(absl::StrCat("logical operand is ", TypeName(lhs)));
      }
      if (b.op == BinaryOp::kAnd && !lhs.as_bool()) return false;
      if (b.op == BinaryOp::kOr && lhs.as_bool()) return true;
      Value rhs = Eval(*b.rhs, frame);
      if (!rhs.is_bool()) {
        throw RuntimeFault(absl::StrCat("logical operand is ", TypeName(rhs)));
      }
      return rhs.as_bool();
    }
    Value lhs = Eval(*b.lhs, frame);
    Value rhs = Eval(*b.rhs, frame);
    switch (b.op) {
      case BinaryOp::kEq: return ValueEq(lhs, rhs);
      case BinaryOp::kNe: return !ValueEq(lhs, rhs);
      case BinaryOp::kLt:
      case BinaryOp::kLe:
      case BinaryOp::kGt:
      case BinaryOp::kGe: return Compare(b.op, lhs, rhs);
      default: return Arith(b.op, lhs, rhs);
    }
  }

  static Value Compare(BinaryOp op, const Value& lhs, const Value& rhs) {
    int cmp = 0;
    if (lhs.is_str() && rhs.is_str()) {
      cmp = lhs.as_str().compare(rhs.as_str());
      cmp = cmp < 0 ? -1 : (cmp > 0 ? 1 : 0);
    } else if (lhs.is_int() && rhs.is_int()) {
      cmp = lhs.as_int() < rhs.as_int() ? -1
                                        : (lhs.as_int() > rhs.as_int() ? 1 : 0);
    } else if ((lhs.is_int() || lhs.is_float()) &&
               (rhs.is_int() || rhs.is_float())) {
      const double x = lhs.is_int() ? static_cast<double>(lhs.as_int())
                                    : lhs.as_float();
      const double y = rhs.is_int() ? static_cast<double>(rhs.as_int())
                                    : rhs.as_float();
      if (std::isnan(x) || std::isnan(y)) return false;
      cmp = x < y ? -1 : (x > y ? 1 : 0);
    } else {
      throw RuntimeFault(absl::StrFormat("cannot compare %s with %s",
                                         TypeName(lhs), TypeName(rhs)));
    }
    switch (op) {
      case BinaryOp::kLt: return cmp < 0;
      case BinaryOp::kLe: return cmp <= 0;
      case BinaryOp::kGt: return cmp > 0;
      default: return cmp >= 0;
    }
  }

  Value Arith(BinaryOp op, const Value& lhs, const Value& rhs) {
    if (op == BinaryOp::kAdd && lhs.is_str() && rhs.is_str()) {
      Value out = lhs.as_str() + rhs.as_str();
      CheckSize(out);
      return out;
    }
    if (op == BinaryOp::kAdd && lhs.is_list() && rhs.is_list()) {
      if (static_cast<int64_t>(lhs.as_list().size() + rhs.as_list().size()) >
          limits_.max_value_size) {
        throw RuntimeFault("value exceeds the maximum size");
      }
      ValueList out = lhs.as_list();
      out.insert(out.end(), rhs.as_list().begin(), rhs.as_list().end());
      return out;
    }
    if (lhs.is_int() && rhs.is_int()) {
      const int64_t x = lhs.as_int();
      const int64_t y = rhs.as_int();
      int64_t r = 0;
      bool overflow = false;
      switch (op) {
        case BinaryOp::kAdd: overflow = __builtin_add_overflow(x, y, &r); break;
        case BinaryOp::kSub: overflow = __builtin_sub_overflow(x, y, &r); break;
        case BinaryOp::kMul: overflow = __builtin_mul_overflow(x, y, &r); break;
        case BinaryOp::kDiv:
        case BinaryOp::kMod:
          if (y == 0) throw RuntimeFault("division by zero");
          if (x == std::numeric_limits<int64_t>::min() && y == -1) {
            overflow = true;
            break;
          }
          r = op == BinaryOp::kDiv ? x / y : x % y;
          break;
        default: break;
      }
      if (overflow) throw RuntimeFault("integer overflow");
      return r;
    }
    if ((lhs.is_int() || lhs.is_float()) && (rhs.is_int() || rhs.is_float())) {
      const double x = lhs.is_int() ? static_cast<double>(lhs.as_int())
                                    : lhs.as_float();
      const double y = rhs.is_int() ? static_cast<double>(rhs.as_int())
                                    : rhs.as_float();
      switch (op) {
        case BinaryOp::kAdd: return x + y;
        case BinaryOp::kSub: return x - y;
        case BinaryOp::kMul: return x * y;
        case BinaryOp::kDiv: return x / y;
        case BinaryOp::kMod: return std::fmod(x, y);
        default: break;
      }
    }
    throw RuntimeFault(absl::StrFormat("unsupported operands for '%s': %s, %s",
                                       testlang::BinaryOpText(op),
                                       TypeName(lhs), TypeName(rhs)));
  }

  const SutRegistry& registry_;
  const Limits& limits_;
  BuiltinState state_;
  Coverage coverage_;
  int64_t steps_ = 0;
  int depth_ = 0;
  std::optional<Value> return_value_;
  StmtPath current_top_;
};

}  // namespace

ExecutionOutcome Execute(const Block& block, const Environment& env,
                         const SutRegistry& registry, const Limits& limits,
                         const Program* functions) {
  ExecutionOutcome out;
  Interpreter interp(registry, limits, env);
  Frame frame;
  frame.module = functions;
  frame.coverage = &interp.coverage().block;
  frame.scopes.push_back(env.bindings);
  try {
    if (interp.RunBlock(block, frame, {}, true) == Flow::kReturn) {
      throw RuntimeFault("'return' outside a function");
    }
    out.status = ExecStatus::kOk;
  } catch (const AssertFailed& f) {
    out.status = ExecStatus::kAssertFail;
    out.failed_assert = interp.current_top();
    out.error = absl::StrCat("assertion failed at ", f.where);
  } catch (const RuntimeFault& f) {
    out.status = ExecStatus::kRuntimeError;
    out.error = f.what();
  } catch (const std::exception& e) {
    out.status = ExecStatus::kRuntimeError;
    out.error = e.what();
  } catch (const StepLimitHit&) {
    out.status = ExecStatus::kStepLimit;
    out.error = absl::StrCat("step limit of ", limits.max_steps, " exceeded");
  }
  out.bindings = std::move(frame.scopes.front());
  out.coverage = std::move(interp.coverage());
  out.steps_used = interp.steps();
  return out;
}

CallOutcome CallFunction(const FuncDef& fn, const std::vector<Value>& args,
                         const SutRegistry& registry, const Limits& limits,
                         const Program* functions, const Environment& env) {
  CallOutcome out;
  Interpreter interp(registry, limits, env);
  try {
    const Program* module = functions;
    std::string key = fn.name;
    if (fn.origin == testlang::FuncOrigin::kSut &&
        registry.Find(fn.name) == &fn) {
      module = &registry.program();
      key = absl::StrCat(std::string(testlang::kSutPrefix), fn.name);
    }
    out.value = interp.Call(fn, args, module, key);
    out.status = ExecStatus::kOk;
  } catch (const AssertFailed& f) {
    out.status = ExecStatus::kAssertFail;
    out.error = absl::StrCat("assertion failed at ", f.where);
  } catch (const RuntimeFault& f) {
    out.status = ExecStatus::kRuntimeError;
    out.error = f.what();
  } catch (const std::exception& e) {
    out.status = ExecStatus::kRuntimeError;
    out.error = e.what();
  } catch (const StepLimitHit&) {
    out.status = ExecStatus::kStepLimit;
    out.error = absl::StrCat("step limit of ", limits.max_steps, " exceeded");
  }
  out.coverage = std::move(interp.coverage());
  out.steps_used = interp.steps();
  return out;
}

}  // namespace mrlift::runtime
