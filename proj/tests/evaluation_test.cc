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

#include <algorithm>

#include <gtest/gtest.h>

#include "mrlift/evaluation/evaluation.h"
#include "mrlift/testlang/parser.h"

namespace mrlift::evaluation {
namespace {

runtime::SutRegistry Registry(const std::string& text) {
  auto p = testlang::ParseProgram(text, testlang::FuncOrigin::kSut);
  EXPECT_TRUE(p.ok()) << p.status();
  return runtime::SutRegistry(*p);
}

int CountOf(const std::vector<Mutant>& ms, MutationOperator op) {
  int n = 0;
  for (const Mutant& m : ms) n += m.op == op;
  return n;
}

constexpr char kSut[] =
    "fn f(a, b) {\n    if a < b {\n        return a + 1;\n    }\n"
    "    return b;\n}\n";

TEST(MutationTest, OperatorCounts) {
  const std::vector<Mutant> ms = MutateSut(Registry(kSut));
  EXPECT_EQ(CountOf(ms, MutationOperator::kAor), 3);
  EXPECT_EQ(CountOf(ms, MutationOperator::kRor), 5);
  // 1 -> 2, 0 (c - 1 and 0 coincide).
  EXPECT_EQ(CountOf(ms, MutationOperator::kConstPerturb), 2);
  EXPECT_EQ(CountOf(ms, MutationOperator::kBoolNeg), 1);
  EXPECT_EQ(CountOf(ms, MutationOperator::kStmtDel), 1);
  for (size_t i = 0; i < ms.size(); ++i) EXPECT_EQ(ms[i].id, static_cast<int>(i));
}

TEST(MutationTest, OperatorSubsetAndIds) {
  const std::vector<Mutant> ms =
      MutateSut(Registry(kSut), {MutationOperator::kRor}, 100);
  ASSERT_EQ(ms.size(), 5u);
  EXPECT_EQ(ms.front().id, 100);
  EXPECT_EQ(ms.front().location.function, "f");
}

Suite SuiteOf(const std::string& name, const std::string& tests) {
  auto p = testlang::ParseProgram(tests);
  EXPECT_TRUE(p.ok()) << p.status();
  Suite s{name, {}};
  for (const testlang::TestDef& t : p->tests) s.tests.push_back({t.name, t.body, {}});
  return s;
}

TEST(MutationTest, ScoresAndEquivalence) {
  const runtime::SutRegistry original = Registry(kSut);
  const std::vector<Mutant> ms = MutateSut(original);
  const std::vector<Suite> suites = {
      SuiteOf("weak", "test w { assert sut.f(5, 1) == 1; }"),
      SuiteOf("strong", "test s1 { assert sut.f(1, 2) == 2; }\n"
                        "test s2 { assert sut.f(2, 2) == 2; }\n"
                        "test s3 { assert sut.f(0, 9) == 1; }")};
  const std::map<std::string, std::vector<std::string>> combos = {
      {"W", {"weak"}}, {"W+S", {"weak", "strong"}}};
  auto r = RunMutationTesting(original, suites, ms, combos, {}, 2);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->generated, static_cast<int>(ms.size()));
  EXPECT_GT(r->mutation_score.at("W+S"), r->mutation_score.at("W"));
  EXPECT_TRUE(std::includes(r->killed.at("W+S").begin(),
                            r->killed.at("W+S").end(),
                            r->killed.at("W").begin(), r->killed.at("W").end()));
  const double expected =
      static_cast<double>(r->killed.at("W+S").size()) /
      (r->generated - static_cast<int>(r->equivalent.size()));
  EXPECT_DOUBLE_EQ(r->mutation_score.at("W+S"), expected);
  // The weak suite never enters the if branch.
  EXPECT_LT(r->line_coverage.at("W"), 1.0);
  EXPECT_DOUBLE_EQ(r->line_coverage.at("W+S"), 1.0);
  for (int id : r->equivalent) EXPECT_FALSE(r->killed.at("W+S").contains(id));
}

TEST(MutationTest, SuiteFailingOnOriginalIsRejected) {
  const runtime::SutRegistry original = Registry(kSut);
  auto r = RunMutationTesting(
      original, {SuiteOf("bad", "test b { assert sut.f(1, 2) == 7; }")}, {},
      {{"B", {"bad"}}}, {});
  EXPECT_FALSE(r.ok());
}

TEST(MetricTest, GeneralizableThresholds) {
  pipeline::Applicability a;
  a.applicable = 8;
  a.pool_size = 10;
  const std::map<int, bool> m = MetricGeneralizable(a);
  EXPECT_TRUE(m.at(0));
  EXPECT_TRUE(m.at(75));
  EXPECT_FALSE(m.at(100));
}

TEST(SeededTest, CipherArgumentSwapLoads) {
  auto c = pipeline::LoadCase(std::string(MRLIFT_CORPUS_DIR) + "/cipher");
  ASSERT_TRUE(c.ok()) << c.status();
  auto seeded = LoadSeededMutants(*c, 40);
  ASSERT_TRUE(seeded.ok()) << seeded.status();
  ASSERT_EQ(seeded->size(), 1u);
  EXPECT_EQ((*seeded)[0].id, 40);
  EXPECT_EQ((*seeded)[0].op, MutationOperator::kSeeded);
  EXPECT_EQ((*seeded)[0].description, "SEEDED argument_swap");
}

TEST(CsvTest, Rows) {
  AdequacyTotals t;
  t.statements = 4;
  t.scored_mutants = 8;
  t.covered["D"] = 3;
  t.killed["D"] = 2;
  EXPECT_EQ(AdequacyCsv(t, {"D"}),
            "combo,line_coverage,mutation_score\nD,0.7500,0.2500\n");
}

}  // namespace
}  // namespace mrlift::evaluation
