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

#ifndef MRLIFT_ANALYSIS_RESOLVER_H_
#define MRLIFT_ANALYSIS_RESOLVER_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mrlift/testlang/ast.h"
#include "mrlift/testlang/checker.h"

namespace mrlift::analysis {

struct ResolutionContext {
  // Helper functions available to generated code (e.g. those of the test
  // file), matched by exact name.
  std::vector<testlang::FuncDef> helpers;
  testlang::SutSignatures suts;
};

struct ResolvedFunction {
  testlang::FuncDef fn;
  // Helpers reachable from `fn`, in first-use order.
  std::vector<testlang::FuncDef> linked;
};

// Links every free callee of `fn` to a builtin, a SUT entry (`sut.X`), or a
// context helper, transitively through linked helpers. Fails with NotFound
// "unresolved name(s): a, b" listing the names in first-use order.
absl::StatusOr<ResolvedFunction> ResolveDependencies(
    const testlang::FuncDef& fn, const ResolutionContext& context);

// `fn` followed by its linked helpers, ready for CheckProgram / Execute.
testlang::Program AsProgram(const ResolvedFunction& resolved);

}  // namespace mrlift::analysis

#endif  // MRLIFT_ANALYSIS_RESOLVER_H_
