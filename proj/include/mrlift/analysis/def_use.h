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

#ifndef MRLIFT_ANALYSIS_DEF_USE_H_
#define MRLIFT_ANALYSIS_DEF_USE_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mrlift/testlang/ast.h"

namespace mrlift::analysis {

using testlang::StmtPath;

// Pseudo-variable read and written by every statement that (transitively)
// calls a stateful builtin such as now_ticks or rand_int. Keeps the order of
// those calls intact under slicing.
inline constexpr char kStateVar[] = "$state";

// Where callees are looked up when deciding whether a call is stateful.
struct CallContext {
  const testlang::Program* functions = nullptr;
  const testlang::Program* sut = nullptr;
};

// Callee names (as written at call sites) that reach a stateful builtin.
std::set<std::string> StatefulCallees(const testlang::Block& block,
                                      const CallContext& context);

// Statement-level data dependencies of one block, nested statements
// included. Nodes are statement paths in textual pre-order.
struct DefUseGraph {
  std::vector<StmtPath> nodes;
  std::map<StmtPath, std::set<std::string>> defs;
  std::map<StmtPath, std::set<std::string>> uses;
  // a -> {b...}: statement a reads a value that b may have written.
  std::map<StmtPath, std::set<StmtPath>> edges;
  // Nested statement -> its enclosing IF/FOR.
  std::map<StmtPath, StmtPath> parent;
  // Top-level variable name -> definitions reaching the end of the block.
  std::map<std::string, std::set<StmtPath>> reaching_at_end;
  std::vector<StmtPath> returns;
};

// `params` are treated as defined on entry (for function bodies).
DefUseGraph BuildDefUseGraph(const testlang::Block& block,
                             const CallContext& context = {},
                             const std::vector<std::string>& params = {});

// Line-oriented dump: one "a -> b" line per edge, in node order.
std::string DumpDefUseGraph(const DefUseGraph& graph);

}  // namespace mrlift::analysis

#endif  // MRLIFT_ANALYSIS_DEF_USE_H_
