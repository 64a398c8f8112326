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

#ifndef MRLIFT_ANALYSIS_SLICER_H_
#define MRLIFT_ANALYSIS_SLICER_H_

#include <set>
#include <string>

#include "absl/status/statusor.h"
#include "mrlift/analysis/def_use.h"
#include "mrlift/testlang/ast.h"

namespace mrlift::analysis {

struct Slice {
  // Kept statements; std::set order on paths is textual pre-order.
  std::set<StmtPath> kept;
  std::set<std::string> targets;
};

// Smallest set closed under data dependence and control containment that
// holds every definition of a target reaching the end of the block. Fails
// with InvalidArgument if a target is never defined at top level.
absl::StatusOr<Slice> BackwardSlice(const DefUseGraph& graph,
                                    const std::set<std::string>& targets);

// Closure from explicit seed statements (used for function bodies, seeded
// with every `return`).
std::set<StmtPath> CloseOver(const DefUseGraph& graph,
                             const std::set<StmtPath>& seeds);

// Copy of `block` restricted to `kept`, order preserved, ids renumbered.
testlang::Block ApplySlice(const testlang::Block& block,
                           const std::set<StmtPath>& kept);

// Restricts a generated snippet to the statements that build `targets`.
absl::StatusOr<testlang::Block> RefineSnippet(
    const testlang::Block& block, const std::set<std::string>& targets,
    const CallContext& context = {});

// Keeps only the statements a function's return values depend on.
testlang::FuncDef RefineFunction(const testlang::FuncDef& fn,
                                 const CallContext& context = {});

}  // namespace mrlift::analysis

#endif  // MRLIFT_ANALYSIS_SLICER_H_
