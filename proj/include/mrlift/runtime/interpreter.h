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

#ifndef MRLIFT_RUNTIME_INTERPRETER_H_
#define MRLIFT_RUNTIME_INTERPRETER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mrlift/runtime/registry.h"
#include "mrlift/runtime/value.h"
#include "mrlift/testlang/ast.h"

namespace mrlift::runtime {

inline constexpr int64_t kDefaultMaxSteps = 100000;

inline constexpr int kCallDepthCeiling = 2000;

struct Limits {
  int64_t max_steps = kDefaultMaxSteps;
  // Capped at kCallDepthCeiling so deep recursion cannot exhaust the native
  // stack.
  int max_call_depth = 200;
  // Strings and lists longer than this are a runtime error.
  int64_t max_value_size = 1 << 20;
};

// Initial state of one execution. `now_ticks()` returns clock_start, then
// clock_start + 1, and so on; `rand_int` draws from a generator seeded with
// `seed`.
struct Environment {
  Bindings bindings;
  int64_t clock_start = 1;
  uint64_t seed = 0;
};

enum class ExecStatus { kOk, kAssertFail, kRuntimeError, kStepLimit };

const char* ExecStatusName(ExecStatus status);

using HitCounts = std::map<testlang::StmtPath, int64_t>;

struct Coverage {
  // Statements of the executed block.
  HitCounts block;
  // Statements of called functions, keyed by callee as written: SUT
  // functions as "sut.<name>", program functions by bare name.
  std::map<std::string, HitCounts> functions;
};

struct ExecutionOutcome {
  ExecStatus status = ExecStatus::kOk;
  Bindings bindings;
  // Path of the failing assert in the executed block, or of the top-level
  // statement whose call chain failed an assert.
  std::optional<testlang::StmtPath> failed_assert;
  std::optional<std::string> error;
  Coverage coverage;
  int64_t steps_used = 0;
};

// Executes `block` as a test body. Calls to plain names resolve to
// `functions` (helpers, transformations) and then to builtins; `sut.X`
// resolves in the registry. Never throws; never mutates its inputs.
ExecutionOutcome Execute(const testlang::Block& block, const Environment& env,
                         const SutRegistry& registry, const Limits& limits,
                         const testlang::Program* functions = nullptr);

struct CallOutcome {
  ExecStatus status = ExecStatus::kOk;
  Value value;
  std::optional<std::string> error;
  Coverage coverage;
  int64_t steps_used = 0;
};

// Calls `fn` in a fresh scope. Plain callees inside `fn` resolve to
// `functions` first.
CallOutcome CallFunction(const testlang::FuncDef& fn,
                         const std::vector<Value>& args,
                         const SutRegistry& registry, const Limits& limits,
                         const testlang::Program* functions = nullptr,
                         const Environment& env = {});

}  // namespace mrlift::runtime

#endif  // MRLIFT_RUNTIME_INTERPRETER_H_
