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

#ifndef MRLIFT_TESTLANG_CHECKER_H_
#define MRLIFT_TESTLANG_CHECKER_H_

#include <map>
#include <string>
#include <vector>

#include "mrlift/testlang/ast.h"

namespace mrlift::testlang {

// Callable SUT names (without the `sut.` prefix) and their arities.
using SutSignatures = std::map<std::string, int, std::less<>>;

enum class Severity { kWarning, kError };

struct Diagnostic {
  Span span;
  Severity severity = Severity::kError;
  // "fn name" or "test name".
  std::string where;
  std::string message;
};

struct CheckReport {
  bool ok = true;
  std::vector<Diagnostic> diagnostics;

  int error_count() const;
};

std::string FormatDiagnostic(const Diagnostic& d);

// Static name, arity, scoping and return-path checks. A program is
// "compilable" iff the report is ok. Pure and deterministic.
CheckReport CheckProgram(const Program& program, const SutSignatures& suts);

// True when every control path through `block` ends in a `return`.
bool AlwaysReturns(const Block& block);

}  // namespace mrlift::testlang

#endif  // MRLIFT_TESTLANG_CHECKER_H_
