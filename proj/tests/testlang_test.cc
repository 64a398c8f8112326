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

#include <gtest/gtest.h>

#include "absl/strings/match.h"
#include "mrlift/testlang/checker.h"
#include "mrlift/testlang/parser.h"
#include "mrlift/testlang/printer.h"
#include "mrlift/testlang/token.h"

namespace mrlift::testlang {
namespace {

TEST(LexerTest, MinimalLet) {
  auto tokens = Tokenize("let x = 1;");
  ASSERT_TRUE(tokens.ok());
  ASSERT_EQ(tokens->size(), 5u);
  EXPECT_EQ((*tokens)[0].kind, TokenKind::kKeyword);
  EXPECT_EQ((*tokens)[1].kind, TokenKind::kIdent);
  EXPECT_EQ((*tokens)[2].text, "=");
  EXPECT_EQ((*tokens)[3].kind, TokenKind::kIntLit);
  EXPECT_EQ((*tokens)[4].text, ";");
}

TEST(LexerTest, StringEscapesSurviveRoundTrip) {
  const std::string raw = "a\"b\\c\n\td";
  auto back = UnescapeStringLiteral(EscapeStringLiteral(raw));
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(*back, raw);
}

TEST(LexerTest, UnterminatedStringFails) {
  EXPECT_FALSE(Tokenize("let s = \"abc;").ok());
}

TEST(ParserTest, ErrorCarriesPosition) {
  auto p = ParseProgram("fn f(a) {\n  return a +;\n}\n");
  ASSERT_FALSE(p.ok());
  EXPECT_TRUE(absl::StrContains(p.status().message(), "line 2")) << p.status();
}

TEST(ParserTest, AnnotationsAndOrigins) {
  auto p = ParseProgram(R"(
#[sut]
fn f(a) { return a; }
#[transformation]
fn t(x) -> int { return x + 1; }
fn h(y) { return y; }
test k {
  #[source] let a = 1;
  #[followup] let b: int = 2;
  assert sut.f(a) + 1 == sut.f(b);
}
)");
  ASSERT_TRUE(p.ok()) << p.status();
  ASSERT_EQ(p->functions.size(), 3u);
  EXPECT_EQ(p->functions[0].origin, FuncOrigin::kSut);
  EXPECT_EQ(p->functions[1].origin, FuncOrigin::kTransformation);
  EXPECT_EQ(p->functions[2].origin, FuncOrigin::kHelper);
  ASSERT_EQ(p->tests.size(), 1u);
  const Block& body = p->tests[0].body;
  ASSERT_EQ(body.stmts.size(), 3u);
  EXPECT_EQ(body.stmts[0].annotations, std::vector<std::string>{"source"});
  EXPECT_EQ(body.stmts[1].annotations, std::vector<std::string>{"followup"});
  EXPECT_EQ(body.stmts[2].id, 2);
}

TEST(ParserTest, PrecedenceIsPreservedByPrinter) {
  for (const char* text : {"1 + 2 * 3", "(1 + 2) * 3", "1 - (2 - 3)",
                           "-(a + b)", "!(a && b) || c", "a[0][1] + f(x)[2]",
                           "1 < 2 == true"}) {
    auto e = ParseExpression(text);
    ASSERT_TRUE(e.ok()) << text;
    auto again = ParseExpression(PrintExpr(*e));
    ASSERT_TRUE(again.ok()) << PrintExpr(*e);
    EXPECT_EQ(*e, *again) << text << " printed as " << PrintExpr(*e);
  }
  auto e = ParseExpression("(1 + 2) * 3");
  ASSERT_TRUE(e.ok());
  EXPECT_EQ(PrintExpr(*e), "(1 + 2) * 3");
}

TEST(ParserTest, NestedBlocksRoundTrip) {
  const std::string src = R"(fn f(xs) {
    let total = 0;
    for x in xs {
        if x > 0 {
            total = total + x;
        } else {
            total = total - 1;
        }
    }
    return total;
}
)";
  auto p = ParseProgram(src);
  ASSERT_TRUE(p.ok()) << p.status();
  EXPECT_EQ(PrintProgram(*p), src);
}

TEST(CheckerTest, UnresolvedNameIsReported) {
  auto p = ParseProgram("fn f(a) { return g(a) + b; }");
  ASSERT_TRUE(p.ok());
  CheckReport r = CheckProgram(*p, {});
  EXPECT_FALSE(r.ok);
  ASSERT_GE(r.diagnostics.size(), 2u);
  std::string all;
  for (const Diagnostic& d : r.diagnostics) all += FormatDiagnostic(d) + "\n";
  EXPECT_TRUE(absl::StrContains(all, "'g'")) << all;
  EXPECT_TRUE(absl::StrContains(all, "'b'")) << all;
}

TEST(CheckerTest, BuiltinArityIsChecked) {
  auto p = ParseProgram("fn f(a) { return len(a, a); }");
  ASSERT_TRUE(p.ok());
  EXPECT_FALSE(CheckProgram(*p, {}).ok);
}

TEST(CheckerTest, WellFormedProgramPasses) {
  auto p = ParseProgram(
      "fn f(a) { let n = len(a); if n > 2 { return n; } return 0; }");
  ASSERT_TRUE(p.ok());
  CheckReport r = CheckProgram(*p, {});
  EXPECT_TRUE(r.ok) << (r.diagnostics.empty()
                            ? ""
                            : FormatDiagnostic(r.diagnostics[0]));
}

TEST(CheckerTest, AlwaysReturns) {
  auto yes = ParseStatements("if a { return 1; } else { return 2; }");
  auto no = ParseStatements("if a { return 1; }");
  ASSERT_TRUE(yes.ok());
  ASSERT_TRUE(no.ok());
  EXPECT_TRUE(AlwaysReturns(*yes));
  EXPECT_FALSE(AlwaysReturns(*no));
}

}  // namespace
}  // namespace mrlift::testlang
