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

#include "mrlift/testlang/builtins.h"

#include <array>

namespace mrlift::testlang {
namespace {

constexpr std::array kBuiltins = {
    BuiltinInfo{"len", 1},         BuiltinInfo{"str", 1},
    BuiltinInfo{"int", 1},         BuiltinInfo{"float", 1},
    BuiltinInfo{"abs", 1},         BuiltinInfo{"min", 2},
    BuiltinInfo{"max", 2},         BuiltinInfo{"pow", 2},
    BuiltinInfo{"sqrt", 1},        BuiltinInfo{"floor", 1},
    BuiltinInfo{"round", 1},       BuiltinInfo{"upper", 1},
    BuiltinInfo{"lower", 1},       BuiltinInfo{"trim", 1},
    BuiltinInfo{"split", 2},       BuiltinInfo{"join", 2},
    BuiltinInfo{"substr", 3},      BuiltinInfo{"contains", 2},
    BuiltinInfo{"index_of", 2},    BuiltinInfo{"replace", 3},
    BuiltinInfo{"starts_with", 2}, BuiltinInfo{"ends_with", 2},
    BuiltinInfo{"reverse", 1},     BuiltinInfo{"ord", 1},
    BuiltinInfo{"chr", 1},         BuiltinInfo{"pad_left", 3},
    BuiltinInfo{"push", 2},        BuiltinInfo{"slice", 3},
    BuiltinInfo{"sort", 1},        BuiltinInfo{"sum", 1},
    BuiltinInfo{"range", 2},       BuiltinInfo{"set_at", 3},
    BuiltinInfo{"parse_date", 1},  BuiltinInfo{"plus_days", 2},
    BuiltinInfo{"format_date", 2}, BuiltinInfo{"now_ticks", 0, true},
    BuiltinInfo{"rand_int", 2, true},    BuiltinInfo{"type_of", 1},
    BuiltinInfo{"unpack", 2},
};

}  // namespace

std::span<const BuiltinInfo> AllBuiltins() { return kBuiltins; }

const BuiltinInfo* FindBuiltin(std::string_view name) {
  for (const BuiltinInfo& b : kBuiltins) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

}  // namespace mrlift::testlang
