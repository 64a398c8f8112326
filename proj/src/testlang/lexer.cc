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

#include <array>
#include <cctype>
#include <string>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mrlift/testlang/token.h"

namespace mrlift::testlang {
namespace {

constexpr std::array<std::string_view, 10> kKeywords = {
    "fn", "test", "let", "if", "else", "for", "in", "return", "assert", "unit"};

// Longest punctuators first so that maximal munch works by prefix order.
constexpr std::array<std::string_view, 24> kPuncts = {
    "==", "!=", "<=", ">=", "&&", "||", "->", "(", ")", "{", "}", "[",
    "]",  ",",  ";",  ":",  ".",  "=",  "<",  ">", "+", "-", "*", "/"};

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool IsDigit(char c) { return c >= '0' && c <= '9'; }

absl::Status LexError(int line, int col, std::string_view message) {
  return absl::InvalidArgumentError(
      absl::StrFormat("line %d, col %d: %s", line, col, std::string(message)));
}

}  // namespace

const char* TokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::kIdent: return "IDENT";
    case TokenKind::kIntLit: return "INT_LIT";
    case TokenKind::kFloatLit: return "FLOAT_LIT";
    case TokenKind::kStrLit: return "STR_LIT";
    case TokenKind::kBoolLit: return "BOOL_LIT";
    case TokenKind::kKeyword: return "KEYWORD";
    case TokenKind::kPunct: return "PUNCT";
    case TokenKind::kAnnotation: return "ANNOTATION";
  }
  return "?";
}

bool IsKeyword(std::string_view word) {
  for (std::string_view k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

absl::StatusOr<std::vector<Token>> Tokenize(std::string_view source) {
  std::vector<Token> tokens;
  size_t i = 0;
  int line = 1;
  int col = 1;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n && i < source.size(); ++k, ++i) {
      if (source[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < source.size()) {
    const char c = source[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < source.size() && source[i + 1] == '/') {
      while (i < source.size() && source[i] != '\n') advance(1);
      continue;
    }
    const Span span{line, col};

    if (IsIdentStart(c)) {
      size_t j = i;
      while (j < source.size() && IsIdentChar(source[j])) ++j;
      std::string word(source.substr(i, j - i));
      TokenKind kind = TokenKind::kIdent;
      if (word == "true" || word == "false") {
        kind = TokenKind::kBoolLit;
      } else if (IsKeyword(word)) {
        kind = TokenKind::kKeyword;
      }
      advance(j - i);
      tokens.push_back({kind, std::move(word), span});
      continue;
    }

    if (IsDigit(c)) {
      size_t j = i;
      while (j < source.size() && IsDigit(source[j])) ++j;
      bool is_float = false;
      if (j + 1 < source.size() && source[j] == '.' && IsDigit(source[j + 1])) {
        is_float = true;
        ++j;
        while (j < source.size() && IsDigit(source[j])) ++j;
      }
      if (j < source.size() && (source[j] == 'e' || source[j] == 'E')) {
        size_t k = j + 1;
        if (k < source.size() && (source[k] == '+' || source[k] == '-')) ++k;
        if (k < source.size() && IsDigit(source[k])) {
          is_float = true;
          j = k;
          while (j < source.size() && IsDigit(source[j])) ++j;
        }
      }
      if (j < source.size() && IsIdentStart(source[j])) {
        return LexError(line, col, "malformed number literal");
      }
      tokens.push_back({is_float ? TokenKind::kFloatLit : TokenKind::kIntLit,
                        std::string(source.substr(i, j - i)), span});
      advance(j - i);
      continue;
    }

    if (c == '"') {
      size_t j = i + 1;
      bool closed = false;
      while (j < source.size()) {
        if (source[j] == '\\') {
          j += 2;
          continue;
        }
        if (source[j] == '\n') break;
        if (source[j] == '"') {
          closed = true;
          break;
        }
        ++j;
      }
      if (!closed) return LexError(line, col, "unterminated string literal");
      std::string text(source.substr(i, j + 1 - i));
      absl::StatusOr<std::string> decoded = UnescapeStringLiteral(text);
      if (!decoded.ok()) {
        return LexError(line, col, std::string(decoded.status().message()));
      }
      tokens.push_back({TokenKind::kStrLit, std::move(text), span});
      advance(j + 1 - i);
      continue;
    }

    if (c == '#') {
      if (i + 1 >= source.size() || source[i + 1] != '[') {
        return LexError(line, col, "illegal character '#'");
      }
      size_t j = i + 2;
      while (j < source.size() && IsIdentChar(source[j])) ++j;
      if (j == i + 2 || j >= source.size() || source[j] != ']') {
        return LexError(line, col, "malformed annotation");
      }
      tokens.push_back({TokenKind::kAnnotation,
                        std::string(source.substr(i, j + 1 - i)), span});
      advance(j + 1 - i);
      continue;
    }

    bool matched = false;
    for (std::string_view p : kPuncts) {
      if (source.substr(i).starts_with(p)) {
        tokens.push_back({TokenKind::kPunct, std::string(p), span});
        advance(p.size());
        matched = true;
        break;
      }
    }
    if (!matched && (c == '%' || c == '!')) {
      tokens.push_back({TokenKind::kPunct, std::string(1, c), span});
      advance(1);
      matched = true;
    }
    if (!matched) {
      const unsigned char uc = static_cast<unsigned char>(c);
      if (uc >= 0x20 && uc < 0x7f) {
        return LexError(line, col, absl::StrCat("illegal character '",
                                                std::string(1, c), "'"));
      }
      return LexError(line, col,
                      absl::StrFormat("illegal character 0x%02x", uc));
    }
  }
  return tokens;
}

absl::StatusOr<std::string> UnescapeStringLiteral(std::string_view text) {
  if (text.size() < 2 || text.front() != '"' || text.back() != '"') {
    return absl::InvalidArgumentError("not a string literal");
  }
  std::string out;
  for (size_t i = 1; i + 1 < text.size(); ++i) {
    const char c = text[i];
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (i + 2 >= text.size()) {
      return absl::InvalidArgumentError("dangling escape in string literal");
    }
    const char e = text[++i];
    switch (e) {
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case 'r': out.push_back('\r'); break;
      case '0': out.push_back('\0'); break;
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      case 'x': {
        if (i + 2 >= text.size() - 1) {
          return absl::InvalidArgumentError("truncated \\x escape");
        }
        const std::string hex(text.substr(i + 1, 2));
        if (!std::isxdigit(static_cast<unsigned char>(hex[0])) ||
            !std::isxdigit(static_cast<unsigned char>(hex[1]))) {
          return absl::InvalidArgumentError("malformed \\x escape");
        }
        out.push_back(static_cast<char>(std::stoi(hex, nullptr, 16)));
        i += 2;
        break;
      }
      default:
        return absl::InvalidArgumentError(
            absl::StrCat("unknown escape '\\", std::string(1, e), "'"));
    }
  }
  return out;
}

std::string EscapeStringLiteral(std::string_view value) {
  std::string out = "\"";
  for (char c : value) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      default: {
        const unsigned char uc = static_cast<unsigned char>(c);
        if (uc < 0x20 || uc == 0x7f) {
          out += absl::StrFormat("\\x%02x", uc);
        } else {
          out.push_back(c);
        }
      }
    }
  }
  out.push_back('"');
  return out;
}

}  // namespace mrlift::testlang
