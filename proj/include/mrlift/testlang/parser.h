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

#ifndef MRLIFT_TESTLANG_PARSER_H_
#define MRLIFT_TESTLANG_PARSER_H_

#include <string_view>

#include "absl/status/statusor.h"
#include "mrlift/testlang/ast.h"

namespace mrlift::testlang {

// Parses a whole MTL file. Functions annotated `#[sut]` or
// `#[transformation]` get that origin; all others get `default_origin`.
// Errors are InvalidArgument with "line L, col C: ..." of the first offending
// token; no partial program is returned.
absl::StatusOr<Program> ParseProgram(
    std::string_view source, FuncOrigin default_origin = FuncOrigin::kHelper);

// Parses a bare statement list, as produced by a generator for input
// snippets. Statement ids start at 0.
absl::StatusOr<Block> ParseStatements(std::string_view source);

absl::StatusOr<Expr> ParseExpression(std::string_view source);

}  // namespace mrlift::testlang

#endif  // MRLIFT_TESTLANG_PARSER_H_
