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

#ifndef MRLIFT_RUNTIME_BUILTINS_H_
#define MRLIFT_RUNTIME_BUILTINS_H_

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mrlift/runtime/value.h"

namespace mrlift::runtime {

// Raised inside the evaluator for type errors, bad indices and the like.
// Execute converts it into RUNTIME_ERROR.
class RuntimeFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-execution state that builtins may read or advance.
struct BuiltinState {
  int64_t clock = 1;
  uint64_t rng = 0;
  int64_t max_value_size = 1 << 20;
  // Charges `n` extra evaluation steps; throws when the budget runs out.
  std::function<void(int64_t)> charge;
};

// Evaluates builtin `name` (which must exist in the builtin table).
Value CallBuiltin(std::string_view name, const std::vector<Value>& args,
                  BuiltinState& state);

// Proleptic Gregorian calendar helpers used by the date builtins.
int64_t DaysFromCivil(int64_t y, int64_t m, int64_t d);
void CivilFromDays(int64_t days, int64_t& y, int64_t& m, int64_t& d);
bool IsLeapYear(int64_t y);
int64_t DaysInMonth(int64_t y, int64_t m);

}  // namespace mrlift::runtime

#endif  // MRLIFT_RUNTIME_BUILTINS_H_
