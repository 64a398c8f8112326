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

#ifndef MRLIFT_TESTLANG_BUILTINS_H_
#define MRLIFT_TESTLANG_BUILTINS_H_

#include <span>
#include <string_view>

namespace mrlift::testlang {

struct BuiltinInfo {
  std::string_view name;
  int arity;
  // Reads or advances per-execution state (the clock or the rng), so calls
  // are ordered effects for slicing.
  bool stateful = false;
};

// The static signature table shared by the checker, the slicer, and the
// interpreter. Semantics live in the runtime.
std::span<const BuiltinInfo> AllBuiltins();
const BuiltinInfo* FindBuiltin(std::string_view name);

inline constexpr std::string_view kSutPrefix = "sut.";

}  // namespace mrlift::testlang

#endif  // MRLIFT_TESTLANG_BUILTINS_H_
