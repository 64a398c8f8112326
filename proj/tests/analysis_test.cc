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
#include "mrlift/analysis/def_use.h"
#include "mrlift/analysis/resolver.h"
#include "mrlift/analysis/slicer.h"
#include "mrlift/testlang/parser.h"
#include "mrlift/testlang/printer.h"

namespace mrlift::analysis {
namespace {

using testlang::Block;
using testlang::ParseStatements;
using testlang::PrintStatements;

Block Parse(const std::string& code) {
  auto b = ParseStatements(code);
  EXPECT_TRUE(b.ok()) << b.status();
  return *b;
}

TEST(DefUseTest, EdgesFollowReachingDefinitions) {
  Block b = Parse("let a = 1;\nlet b = a + 1;\na = 5;\nlet c = a + b;");
  DefUseGraph g = BuildDefUseGraph(b);
  EXPECT_EQ(g.edges[{1}], (std::set<StmtPath>{{0}}));
  EXPECT_EQ(g.edges[{3}], (std::set<StmtPath>{{1}, {2}}));
  EXPECT_EQ(g.reaching_at_end["a"], (std::set<StmtPath>{{2}}));
}

TEST(DefUseTest, BranchDefinitionsBothReach) {
  Block b = Parse("let x = 0;\nif p { x = 1; }\nlet y = x;");
  DefUseGraph g = BuildDefUseGraph(b, {}, {"p"});
  // Nested paths are (statement, branch, statement).
  EXPECT_EQ(g.edges[{2}], (std::set<StmtPath>{{0}, {1, 0, 0}}));
  EXPECT_EQ(g.parent[StmtPath({1, 0, 0})], StmtPath{1});
}

TEST(SliceTest, DropsStrayStatements) {
  Block b = Parse(
      "let a = 3;\nlet junk = undefined_thing(a);\nassert a > 100;\n"
      "let b = a * 2;");
  auto refined = RefineSnippet(b, {"a", "b"});
  ASSERT_TRUE(refined.ok()) << refined.status();
  EXPECT_EQ(PrintStatements(*refined), "let a = 3;\nlet b = a * 2;\n");
}

TEST(SliceTest, KeepsEnclosingControlFlow) {
  Block b = Parse(
      "let x = 0;\nlet n = 4;\nfor i in range(0, n) { x = x + i; }\n"
      "let y = 7;");
  auto s = BackwardSlice(BuildDefUseGraph(b), {"x"});
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->kept, (std::set<StmtPath>{{0}, {1}, {2}, {2, 0, 0}}));
}

TEST(SliceTest, UndefinedTargetFails) {
  Block b = Parse("let a = 1;");
  EXPECT_FALSE(BackwardSlice(BuildDefUseGraph(b), {"zz"}).ok());
}

TEST(SliceTest, StatefulCallsKeepTheirOrder) {
  Block b = Parse(
      "let t0 = now_ticks();\nlet t1 = now_ticks();\nlet d = t1 + 0;");
  auto s = BackwardSlice(BuildDefUseGraph(b), {"d"});
  ASSERT_TRUE(s.ok());
  // Dropping the first call would change the clock value t1 observes.
  EXPECT_EQ(s->kept, (std::set<StmtPath>{{0}, {1}, {2}}));
}

TEST(SliceTest, RefineFunctionRemovesDeadCode) {
  auto p = testlang::ParseProgram(
      "fn t(a) {\n let probe = nope(a);\n let r = a + 1;\n return r;\n}");
  ASSERT_TRUE(p.ok());
  testlang::FuncDef f = RefineFunction(p->functions[0]);
  EXPECT_EQ(testlang::PrintFunction(f),
            "fn t(a) {\n    let r = a + 1;\n    return r;\n}\n");
}

TEST(ResolverTest, LinksHelpersTransitively) {
  auto p = testlang::ParseProgram(
      "fn t(a) { return h1(a); }\n"
      "fn h1(x) { return h2(x) + sut.f(x); }\n"
      "fn h2(x) { return len(str(x)); }\n"
      "fn unused(x) { return x; }");
  ASSERT_TRUE(p.ok());
  ResolutionContext ctx;
  ctx.helpers = {p->functions[1], p->functions[2], p->functions[3]};
  ctx.suts["f"] = 1;
  auto r = ResolveDependencies(p->functions[0], ctx);
  ASSERT_TRUE(r.ok()) << r.status();
  ASSERT_EQ(r->linked.size(), 2u);
  EXPECT_EQ(r->linked[0].name, "h1");
  EXPECT_EQ(r->linked[1].name, "h2");
}

TEST(ResolverTest, ListsUnresolvedNamesInOrder) {
  auto p = testlang::ParseProgram("fn t(a) { return zed(a) + alpha(a); }");
  ASSERT_TRUE(p.ok());
  auto r = ResolveDependencies(p->functions[0], {});
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(absl::StrContains(r.status().message(), "zed, alpha"))
      << r.status();
}

}  // namespace
}  // namespace mrlift::analysis
