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

#ifndef MRLIFT_TESTLANG_TOKEN_H_
#define MRLIFT_TESTLANG_TOKEN_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace mrlift::testlang {

// 1-based source position. Positions never participate in structural
// equality of AST nodes, so two spans always compare equal.
struct Span {
  int line = 1;
  int col = 1;

  friend bool operator==(const Span&, const Span&) { return true; }
};

enum class TokenKind {
  kIdent,
  kIntLit,
  kFloatLit,
  kStrLit,
  kBoolLit,
  kKeyword,
  kPunct,
  kAnnotation,
};

const char* TokenKindName(TokenKind kind);

struct Token {
  TokenKind kind;
  // Exact source text of the token (string literals keep their quotes and
  // escapes; annotations keep `#[` and `]`).
  std::string text;
  Span span;
};

bool IsKeyword(std::string_view word);

// Splits MTL source into tokens. `//` comments and whitespace are dropped.
// Fails with InvalidArgument ("line L, col C: ...") on an unterminated string
// literal, a malformed annotation, or an illegal character.
absl::StatusOr<std::vector<Token>> Tokenize(std::string_view source);

// Decodes the body of a string literal token (including its quotes).
absl::StatusOr<std::string> UnescapeStringLiteral(std::string_view token_text);

// Produces a double-quoted MTL string literal for `value`.
std::string EscapeStringLiteral(std::string_view value);

}  // namespace mrlift::testlang

#endif  // MRLIFT_TESTLANG_TOKEN_H_
