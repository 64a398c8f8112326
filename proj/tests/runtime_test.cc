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

#include <chrono>
#include <cstdio>

#include <gtest/gtest.h>

#include "mrlift/runtime/interpreter.h"
#include "mrlift/runtime/registry.h"
#include "mrlift/runtime/value.h"
#include "mrlift/testlang/parser.h"

namespace mrlift::runtime {
namespace {

ExecutionOutcome RunCode(const std::string& code, const Limits& limits = {},
                     const SutRegistry& registry = {},
                     const testlang::Program* functions = nullptr,
                     const Environment& env = {}) {
  auto block = testlang::ParseStatements(code);
  EXPECT_TRUE(block.ok()) << block.status();
  return Execute(*block, env, registry, limits, functions);
}

Value Eval(const std::string& expr) {
  ExecutionOutcome out = RunCode("let v = " + expr + ";");
  EXPECT_EQ(out.status, ExecStatus::kOk) << expr << ": "
                                         << out.error.value_or("");
  return out.bindings["v"];
}

TEST(RuntimeTest, IntegerDivisionTruncatesTowardZero) {
  for (int64_t a : {7, -7, 9, -9, 0}) {
    for (int64_t b : {2, -2, 4, -3}) {
      const std::string e = "(" + std::to_string(a) + ") / (" +
                            std::to_string(b) + ")";
      const std::string m = "(" + std::to_string(a) + ") % (" +
                            std::to_string(b) + ")";
      EXPECT_TRUE(ValueEq(Eval(e), Value(a / b))) << e;
      EXPECT_TRUE(ValueEq(Eval(m), Value(a % b))) << m;
    }
  }
}

TEST(RuntimeTest, DivisionByZeroIsRuntimeError) {
  EXPECT_EQ(RunCode("let v = 1 / 0;").status, ExecStatus::kRuntimeError);
}

TEST(RuntimeTest, ListAndStringOps) {
  EXPECT_TRUE(ValueEq(Eval("[1, 2] + [3]"), Value(ValueList{1, 2, 3})));
  EXPECT_TRUE(ValueEq(Eval("split(\"abc\", \"\")"),
                      Value(ValueList{"a", "b", "c"})));
  EXPECT_TRUE(ValueEq(Eval("join(split(\"a,b\", \",\"), \"-\")"),
                      Value("a-b")));
  EXPECT_TRUE(ValueEq(Eval("reverse([1, 2, 3])"), Value(ValueList{3, 2, 1})));
  EXPECT_TRUE(ValueEq(Eval("upper(\"aBc\")"), Value("ABC")));
  EXPECT_TRUE(ValueEq(Eval("sort([3, 1, 2])"), Value(ValueList{1, 2, 3})));
}

TEST(RuntimeTest, CrossTypeValuesAreNeverEqual) {
  EXPECT_FALSE(ValueEq(Value(1), Value(1.0)));
  EXPECT_FALSE(ValueEq(Value(std::nan("")), Value(std::nan(""))));
  EXPECT_TRUE(ValueEq(Value(ValueList{1, "a"}), Value(ValueList{1, "a"})));
}

TEST(RuntimeTest, LiteralizeRoundTrips) {
  for (const Value& v :
       {Value(int64_t{-5}), Value(INT64_MIN), Value(2.5), Value(-0.125),
        Value("q\"uote"), Value(ValueList{1, ValueList{true, "x"}}),
        Value(false)}) {
    ExecutionOutcome out = RunCode("let v = " + LiteralText(v) + ";");
    ASSERT_EQ(out.status, ExecStatus::kOk) << LiteralText(v);
    EXPECT_TRUE(ValueEq(out.bindings["v"], v)) << LiteralText(v);
  }
}

// Independent calendar oracle for the date builtins.
std::string IsoOf(std::chrono::sys_days d) {
  const std::chrono::year_month_day ymd(d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

TEST(RuntimeTest, PlusDaysAgreesWithCivilCalendar) {
  using namespace std::chrono;
  const sys_days base = sys_days(year{1999} / 12 / 25);
  for (int n : {-800, -366, -1, 0, 1, 7, 59, 60, 365, 366, 1461, 5000}) {
    const std::string expr =
        "plus_days(\"1999-12-25\", " + std::to_string(n) + ")";
    EXPECT_TRUE(ValueEq(Eval(expr), Value(IsoOf(base + days(n))))) << expr;
  }
}

TEST(RuntimeTest, DateParsingAndFormatting) {
  EXPECT_TRUE(ValueEq(Eval("parse_date(\"2024-02-29 13:04:05\")"),
                      Value(ValueList{2024, 2, 29, 13, 4, 5})));
  EXPECT_TRUE(ValueEq(Eval("format_date([2024, 3, 9], \"iso\")"),
                      Value("2024-03-09")));
  EXPECT_TRUE(ValueEq(Eval("format_date([2024, 3, 9], \"medium\")"),
                      Value("Mar 9, 2024")));
  EXPECT_EQ(RunCode("let v = parse_date(\"2023-02-29\");").status,
            ExecStatus::kRuntimeError);
}

TEST(RuntimeTest, AssertFailureRecordsPath) {
  ExecutionOutcome out = RunCode("let a = 1;\nassert a == 2;\nlet b = 3;");
  EXPECT_EQ(out.status, ExecStatus::kAssertFail);
  ASSERT_TRUE(out.failed_assert.has_value());
  EXPECT_EQ(*out.failed_assert, testlang::StmtPath{1});
  EXPECT_FALSE(out.bindings.contains("b"));
}

TEST(RuntimeTest, InfiniteLoopHitsStepLimit) {
  auto p = testlang::ParseProgram(
      "fn spin(n) { return spin(n + 1); }\n"
      "fn grow(xs) { let out = xs; for x in xs { out = push(out, x); } "
      "return grow(out); }");
  ASSERT_TRUE(p.ok()) << p.status();
  Limits limits;
  limits.max_steps = 1500;
  limits.max_call_depth = 1000000;
  EXPECT_EQ(RunCode("let v = spin(0);", limits, {}, &*p).status,
            ExecStatus::kStepLimit);
  // A huge depth setting still stops at the ceiling instead of overflowing.
  Limits deep = limits;
  deep.max_steps = 10000000;
  ExecutionOutcome capped = RunCode("let v = spin(0);", deep, {}, &*p);
  EXPECT_NE(capped.status, ExecStatus::kOk);
  EXPECT_NE(capped.status, ExecStatus::kStepLimit);
  ExecutionOutcome loop = RunCode(
      "let total = 0;\nfor i in range(0, 100000000) { total = total + i; }",
      limits);
  EXPECT_EQ(loop.status, ExecStatus::kStepLimit);
  EXPECT_LE(loop.steps_used, limits.max_steps + 1);
}

TEST(RuntimeTest, SutCoverageIsKeyedByPrefix) {
  auto sut = testlang::ParseProgram(
      "fn f(a) { if a > 0 { return g(a); } return 0; }\n"
      "fn g(a) { return a * 2; }",
      testlang::FuncOrigin::kSut);
  ASSERT_TRUE(sut.ok());
  SutRegistry registry(*sut);
  ExecutionOutcome out = RunCode("let v = sut.f(3);", {}, registry);
  ASSERT_EQ(out.status, ExecStatus::kOk);
  EXPECT_TRUE(ValueEq(out.bindings["v"], Value(6)));
  EXPECT_TRUE(out.coverage.functions.contains("sut.f"));
  EXPECT_TRUE(out.coverage.functions.contains("sut.g"));
  const HitCounts& f = out.coverage.functions["sut.f"];
  EXPECT_FALSE(f.contains(testlang::StmtPath{1}));
}

TEST(RuntimeTest, StatefulBuiltinsAreDeterministic) {
  Environment env;
  env.clock_start = 100;
  env.seed = 42;
  const std::string code =
      "let t1 = now_ticks();\nlet t2 = now_ticks();\n"
      "let r = rand_int(0, 1000000);";
  ExecutionOutcome a = RunCode(code, {}, {}, nullptr, env);
  ExecutionOutcome b = RunCode(code, {}, {}, nullptr, env);
  ASSERT_EQ(a.status, ExecStatus::kOk);
  EXPECT_TRUE(ValueEq(a.bindings["t1"], Value(100)));
  EXPECT_TRUE(ValueEq(a.bindings["t2"], Value(101)));
  EXPECT_TRUE(BindingsEq(a.bindings, b.bindings));
}

TEST(RuntimeTest, ValueSizeLimit) {
  Limits limits;
  limits.max_value_size = 64;
  EXPECT_EQ(RunCode("let s = pad_left(\"a\", 100, \"x\");", limits).status,
            ExecStatus::kRuntimeError);
}

}  // namespace
}  // namespace mrlift::runtime
