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

#include "mrlift/analysis/resolver.h"

#include <deque>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "mrlift/testlang/builtins.h"

namespace mrlift::analysis {

using testlang::FuncDef;

absl::StatusOr<ResolvedFunction> ResolveDependencies(
    const FuncDef& fn, const ResolutionContext& context) {
  ResolvedFunction out{fn, {}};
  std::vector<std::string> unresolved;
  std::set<std::string> linked_names;
  std::deque<const FuncDef*> work = {&fn};
  while (!work.empty()) {
    const FuncDef* current = work.front();
    work.pop_front();
    for (const std::string& callee : testlang::CalleesIn(current->body)) {
      if (callee.starts_with(testlang::kSutPrefix)) {
        if (context.suts.count(callee.substr(testlang::kSutPrefix.size())) ==
            0) {
          unresolved.push_back(callee);
        }
        continue;
      }
      if (callee == fn.name) continue;
      const FuncDef* helper = nullptr;
      for (const FuncDef& h : context.helpers) {
        if (h.name == callee) {
          helper = &h;
          break;
        }
      }
      if (helper != nullptr) {
        if (linked_names.insert(callee).second) {
          out.linked.push_back(*helper);
          work.push_back(helper);
        }
        continue;
      }
      if (testlang::FindBuiltin(callee) == nullptr) {
        unresolved.push_back(callee);
      }
    }
  }
  if (!unresolved.empty()) {
    std::vector<std::string> unique;
    std::set<std::string> seen;
    for (const std::string& n : unresolved) {
      if (seen.insert(n).second) unique.push_back(n);
    }
    return absl::NotFoundError(
        absl::StrCat("unresolved name(s): ", absl::StrJoin(unique, ", ")));
  }
  return out;
}

testlang::Program AsProgram(const ResolvedFunction& resolved) {
  testlang::Program program;
  program.functions.push_back(resolved.fn);
  for (const FuncDef& h : resolved.linked) program.functions.push_back(h);
  return program;
}

}  // namespace mrlift::analysis
