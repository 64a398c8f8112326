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

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "mrlift/generator/generator.h"
#include "mrlift/mtc/mtc.h"
#include "mrlift/testlang/parser.h"
#include "mrlift/testlang/printer.h"

namespace mrlift::generator {
namespace {

namespace fs = std::filesystem;

fs::path FreshDir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("mrlift_gen_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct SmallCase {
  runtime::SutRegistry registry;
  mtc::MtcModel model;
  GenContext ctx;
};

SmallCase MakeCase() {
  SmallCase c;
  auto sut = testlang::ParseProgram("fn sq(x) { return x * x; }",
                                    testlang::FuncOrigin::kSut);
  auto test = testlang::ParseProgram(R"(
test neg {
    #[source] let a = 3;
    #[followup] let b = -3;
    assert sut.sq(a) == sut.sq(b);
})");
  c.registry = runtime::SutRegistry(*sut);
  c.model = *mtc::ExtractMtc(*test, "neg", c.registry);
  c.ctx.mut_code = testlang::PrintProgram(*sut);
  c.ctx.mtc_code = testlang::PrintProgram(*test);
  c.ctx.model = &c.model;
  c.ctx.registry = &c.registry;
  c.ctx.pairs = {*mtc::HardcodedPair(c.model, c.registry, {})};
  return c;
}

TEST(ExtractTest, FencedBlocksInOrder) {
  const std::string raw =
      "intro\n```mtl\nlet a = 1;\n```\ntext\n```\nlet b = 2;\n```\n"
      "```mtl\nunterminated";
  EXPECT_EQ(ExtractCodeBlocks(raw),
            (std::vector<std::string>{"let a = 1;\n", "let b = 2;\n"}));
}

TEST(ExtractTest, SkeletonFilterKeepsMatchingFunctions) {
  SmallCase c = MakeCase();
  const mtc::TransformationSkeleton s = mtc::DeriveSkeleton(c.model);
  const std::string raw =
      "```mtl\nfn other(a) { return a; }\n```\n"
      "```mtl\nfn transform_neg(a) { return 0 - a; }\n```\n";
  auto blocks = ExtractCodeBlocks(raw, s);
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_NE(blocks[0].find("transform_neg"), std::string::npos);
}

TEST(PromptTest, DigestDependsOnSamplingSettings) {
  SmallCase c = MakeCase();
  GenConfig cfg;
  const std::string prompt = AssemblePrompt(c.ctx, cfg);
  EXPECT_EQ(prompt, AssemblePrompt(c.ctx, cfg));
  const std::string d0 = RequestDigest(prompt, cfg);
  EXPECT_EQ(d0.size(), 64u);
  GenConfig other = cfg;
  other.temperature = 0.9;
  EXPECT_NE(d0, RequestDigest(prompt, other));
  other = cfg;
  other.k = cfg.k + 1;
  EXPECT_NE(d0, RequestDigest(AssemblePrompt(c.ctx, other), other));
}

TEST(SynthTest, SameSeedSameResponses) {
  SmallCase c = MakeCase();
  auto backend = MakeSynthBackend();
  GenConfig cfg;
  cfg.seed = 7;
  for (Task task : {Task::kSourceInputs, Task::kInputPairs,
                    Task::kTransformation}) {
    GenContext ctx = c.ctx;
    ctx.task = task;
    if (task == Task::kInputPairs) ctx.sources = {{{"a", 5}}, {{"a", -2}}};
    if (task == Task::kTransformation) {
      ctx.skeleton = mtc::DeriveSkeleton(c.model);
    }
    auto a = Generate(ctx, cfg, *backend);
    cfg.parallelism = 4;
    auto b = Generate(ctx, cfg, *backend);
    cfg.parallelism = 1;
    ASSERT_TRUE(a.ok() && b.ok());
    ASSERT_EQ(a->size(), static_cast<size_t>(cfg.repetitions));
    for (size_t i = 0; i < a->size(); ++i) {
      EXPECT_EQ((*a)[i].text, (*b)[i].text);
      EXPECT_EQ((*a)[i].repetition, static_cast<int>(i));
    }
  }
}

TEST(SynthTest, ProfileParsing) {
  auto p = ParseSynthProfile("correct=0.5,overfit=0.5,dead_erroneous=0,"
                             "uncompilable=0");
  ASSERT_TRUE(p.ok()) << p.status();
  EXPECT_DOUBLE_EQ(p->overfit, 0.5);
  EXPECT_FALSE(ParseSynthProfile("bogus=1").ok());
}

TEST(ReplayTest, RecordedResponsesReplayAndFallBack) {
  SmallCase c = MakeCase();
  const fs::path root = FreshDir("replay");
  GenConfig cfg;
  cfg.seed = 3;
  cfg.repetitions = 2;
  GenContext ctx = c.ctx;
  ctx.task = Task::kSourceInputs;

  auto synth = MakeSynthBackend();
  RecordingBackend recorder(*synth);
  auto live = Generate(ctx, cfg, recorder);
  ASSERT_TRUE(live.ok());
  ASSERT_TRUE(recorder.Write(root.string(), false).ok());
  EXPECT_FALSE(recorder.Write(root.string(), false).ok());

  auto replay = MakeReplayBackend(root.string());
  auto again = Generate(ctx, cfg, *replay);
  ASSERT_TRUE(again.ok()) << again.status();
  ASSERT_EQ(again->size(), live->size());
  for (size_t i = 0; i < live->size(); ++i) {
    EXPECT_EQ((*again)[i].text, (*live)[i].text);
  }

  // A label without its own directory reads the default one.
  GenContext labelled = ctx;
  labelled.label = "v1";
  auto fallback = Generate(labelled, cfg, *replay);
  ASSERT_TRUE(fallback.ok()) << fallback.status();
  EXPECT_EQ((*fallback)[0].text, (*live)[0].text);

  // A different prompt no longer matches the recorded digest.
  GenContext changed = ctx;
  changed.mut_code += "\n// edited\n";
  EXPECT_FALSE(Generate(changed, cfg, *replay).ok());
  auto lenient = MakeReplayBackend(root.string(), false);
  EXPECT_TRUE(Generate(changed, cfg, *lenient).ok());
}

TEST(ReplayTest, MissingFixtureIsAnError) {
  SmallCase c = MakeCase();
  auto replay = MakeReplayBackend(FreshDir("empty").string());
  GenContext ctx = c.ctx;
  EXPECT_FALSE(Generate(ctx, GenConfig{}, *replay).ok());
}

TEST(RandomProgramTest, PrintParsesBack) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const testlang::Program p = RandomProgram(seed);
    const std::string text = testlang::PrintProgram(p);
    auto back = testlang::ParseProgram(text);
    ASSERT_TRUE(back.ok()) << seed << ": " << back.status() << "\n" << text;
    EXPECT_EQ(testlang::PrintProgram(*back), text);
  }
  EXPECT_EQ(testlang::PrintProgram(RandomProgram(9)),
            testlang::PrintProgram(RandomProgram(9)));
}

}  // namespace
}  // namespace mrlift::generator
