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
#include "mrlift/mtc/mtc.h"
#include "mrlift/runtime/interpreter.h"
#include "mrlift/testlang/parser.h"
#include "mrlift/testlang/printer.h"

namespace mrlift::mtc {
namespace {

using runtime::Value;

constexpr char kSut[] = R"(
fn gcd(a, b) {
    if b == 0 {
        return a;
    }
    return gcd(b, a % b);
}
)";

constexpr char kTest[] = R"(
fn twice(x) { return 2 * x; }

test gcd_scaling {
    #[source] let a1 = 12;
    #[source] let b1 = 18;
    #[followup] let a2 = twice(a1);
    #[followup] let b2 = 36;
    let g1 = sut.gcd(a1, b1);
    let g2 = sut.gcd(a2, b2);
    assert g2 == 2 * g1;
}

test plain {
    assert sut.gcd(4, 6) == 2;
}
)";

struct Fixture {
  runtime::SutRegistry registry;
  testlang::Program program;
  MtcModel model;
};

Fixture Load(const std::string& test_src = kTest) {
  Fixture f;
  auto sut = testlang::ParseProgram(kSut, testlang::FuncOrigin::kSut);
  EXPECT_TRUE(sut.ok());
  f.registry = runtime::SutRegistry(*sut);
  auto p = testlang::ParseProgram(test_src);
  EXPECT_TRUE(p.ok()) << p.status();
  f.program = *p;
  auto m = ExtractMtc(f.program, "gcd_scaling", f.registry);
  EXPECT_TRUE(m.ok()) << m.status();
  if (m.ok()) f.model = *m;
  return f;
}

TEST(MtcTest, ExtractsVariablesAndInvocations) {
  Fixture f = Load();
  EXPECT_EQ(f.model.source_vars, (std::vector<std::string>{"a1", "b1"}));
  EXPECT_EQ(f.model.followup_vars, (std::vector<std::string>{"a2", "b2"}));
  ASSERT_EQ(f.model.invocations.size(), 2u);
  EXPECT_EQ(f.model.invocations[0].stmt, StmtPath{4});
  EXPECT_EQ(f.model.invocations[1].stmt, StmtPath{5});
  EXPECT_EQ(f.model.relation_asserts, std::vector<StmtPath>{{6}});
  ASSERT_EQ(f.model.helpers.size(), 1u);
  EXPECT_EQ(f.model.helpers[0].name, "twice");
  EXPECT_EQ(AnnotatedTests(f.program), std::vector<std::string>{"gcd_scaling"});
}

TEST(MtcTest, UnannotatedTestIsRejected) {
  Fixture f = Load();
  auto m = ExtractMtc(f.program, "plain", f.registry);
  ASSERT_FALSE(m.ok());
  EXPECT_TRUE(absl::StartsWith(m.status().message(), "extraction:"));
}

TEST(MtcTest, SingleSutCallIsRejected) {
  auto sut = testlang::ParseProgram(kSut, testlang::FuncOrigin::kSut);
  ASSERT_TRUE(sut.ok());
  runtime::SutRegistry registry(*sut);
  auto p = testlang::ParseProgram(R"(
test one_call {
    #[source] let a = 4;
    #[followup] let b = 8;
    assert sut.gcd(a, b) == 4;
})");
  ASSERT_TRUE(p.ok());
  EXPECT_FALSE(ExtractMtc(*p, "one_call", registry).ok());
}

TEST(MtcTest, SkeletonHasListShapeForSeveralFollowups) {
  Fixture f = Load();
  TransformationSkeleton s = DeriveSkeleton(f.model);
  EXPECT_EQ(s.fn_name, "transform_gcd_scaling");
  ASSERT_EQ(s.params.size(), 2u);
  EXPECT_EQ(s.shape, ReturnShape::kList);
  EXPECT_EQ(s.arity_out, 2);
  auto good = testlang::ParseProgram(
      "fn transform_gcd_scaling(a1, b1) { return [a1 * 2, b1 * 2]; }");
  auto bad = testlang::ParseProgram(
      "fn transform_gcd_scaling(a1) { return a1; }");
  ASSERT_TRUE(good.ok() && bad.ok());
  EXPECT_TRUE(MatchSkeleton(good->functions[0], s).ok());
  EXPECT_FALSE(MatchSkeleton(bad->functions[0], s).ok());
}

TEST(MtcTest, HardcodedPairEvaluatesInitSlices) {
  Fixture f = Load();
  auto pair = HardcodedPair(f.model, f.registry, {});
  ASSERT_TRUE(pair.ok()) << pair.status();
  EXPECT_TRUE(runtime::ValueEq(pair->source.at("a1"), Value(12)));
  EXPECT_TRUE(runtime::ValueEq(pair->followup.at("a2"), Value(24)));
  EXPECT_TRUE(runtime::ValueEq(pair->followup.at("b2"), Value(36)));
  EXPECT_EQ(pair->provenance, Provenance::kHardcoded);
}

TEST(MtcTest, SubstitutedPairsValidateAgainstRelation) {
  Fixture f = Load();
  const testlang::Program helpers = HelperProgram(f.model);
  auto run = [&](int a1, int b1, int a2, int b2) {
    InputPair p;
    p.source = {{"a1", a1}, {"b1", b1}};
    p.followup = {{"a2", a2}, {"b2", b2}};
    auto block = SubstituteInputs(f.model, p);
    EXPECT_TRUE(block.ok()) << block.status();
    return runtime::Execute(*block, {}, f.registry, {}, &helpers).status;
  };
  EXPECT_EQ(run(7, 21, 14, 42), runtime::ExecStatus::kOk);
  EXPECT_EQ(run(7, 21, 14, 43), runtime::ExecStatus::kAssertFail);
}

TEST(MtcTest, InstantiationCallsTransformation) {
  Fixture f = Load();
  auto t = testlang::ParseProgram(
      "fn transform_gcd_scaling(a1, b1) { return [twice(a1), twice(b1)]; }");
  ASSERT_TRUE(t.ok());
  auto block = InstantiateWithTransformation(f.model, t->functions[0],
                                             {{"a1", 9}, {"b1", 6}});
  ASSERT_TRUE(block.ok()) << block.status();
  testlang::Program fns = HelperProgram(f.model);
  fns.functions.push_back(t->functions[0]);
  runtime::ExecutionOutcome out =
      runtime::Execute(*block, {}, f.registry, {}, &fns);
  ASSERT_EQ(out.status, runtime::ExecStatus::kOk) << out.error.value_or("");
  EXPECT_TRUE(runtime::ValueEq(out.bindings["b2"], Value(12)));
}

TEST(MtcTest, CanonicalTextIsOrderIndependent) {
  EXPECT_EQ(CanonicalText({{"b", 2}, {"a", "x"}}),
            CanonicalText({{"a", "x"}, {"b", 2}}));
  EXPECT_NE(CanonicalText({{"a", 1}}), CanonicalText({{"a", "1"}}));
}

}  // namespace
}  // namespace mrlift::mtc
