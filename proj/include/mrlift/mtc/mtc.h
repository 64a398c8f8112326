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

#ifndef MRLIFT_MTC_MTC_H_
#define MRLIFT_MTC_MTC_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mrlift/runtime/interpreter.h"
#include "mrlift/runtime/registry.h"
#include "mrlift/runtime/value.h"
#include "mrlift/testlang/ast.h"

namespace mrlift::mtc {

using runtime::Bindings;
using testlang::StmtPath;

inline constexpr char kSourceAnnotation[] = "source";
inline constexpr char kFollowupAnnotation[] = "followup";

struct MutInvocation {
  std::string callee;
  // Statement holding the call.
  StmtPath stmt;
  friend bool operator==(const MutInvocation&, const MutInvocation&) = default;
};

// An MR-encoded test: annotated source/follow-up inputs, the two calls into
// the SUT, and the asserts relating their outputs.
struct MtcModel {
  std::string test_name;
  std::vector<std::string> source_vars;
  std::vector<std::string> followup_vars;
  std::vector<std::optional<testlang::TypeAnn>> source_types;
  std::vector<std::optional<testlang::TypeAnn>> followup_types;
  // Statements of full_body that compute the annotated variables.
  std::set<StmtPath> source_init;
  std::set<StmtPath> followup_init;
  // [0] consumes source inputs, [1] consumes follow-up inputs.
  std::vector<MutInvocation> invocations;
  std::vector<StmtPath> relation_asserts;
  std::vector<testlang::FuncDef> helpers;
  testlang::Block full_body;

  friend bool operator==(const MtcModel&, const MtcModel&) = default;
};

// Fails with FailedPrecondition ("extraction: ...") when the test is
// missing, lacks either annotation, does not make exactly two SUT calls that
// split cleanly into a source side and a follow-up side, or has no assert
// depending on both calls.
absl::StatusOr<MtcModel> ExtractMtc(const testlang::Program& program,
                                    const std::string& test_name,
                                    const runtime::SutRegistry& registry);

// Tests in `program` that carry at least one `#[source]` statement.
std::vector<std::string> AnnotatedTests(const testlang::Program& program);

// The helper functions of the test file as a program, for execution.
testlang::Program HelperProgram(const MtcModel& m);

// Statements of the init slices as a standalone block.
testlang::Block InitBlock(const MtcModel& m);

enum class ReturnShape { kSingle, kList };

struct TransformationSkeleton {
  std::string fn_name;
  std::vector<testlang::Param> params;
  ReturnShape shape = ReturnShape::kSingle;
  // k = number of follow-up variables.
  int arity_out = 1;
  std::optional<testlang::TypeAnn> return_type;

  friend bool operator==(const TransformationSkeleton&,
                         const TransformationSkeleton&) = default;
};

TransformationSkeleton DeriveSkeleton(const MtcModel& m);

// Signature line plus an empty body, as shown to a generator.
std::string PrintSkeleton(const TransformationSkeleton& s);

// Static name / arity / return-shape conformance.
absl::Status MatchSkeleton(const testlang::FuncDef& fn,
                           const TransformationSkeleton& s);

enum class Provenance { kHardcoded, kGenerated };

enum class Verdict { kUnvalidated, kValid, kInvalid };

struct InputPair {
  Bindings source;
  Bindings followup;
  Provenance provenance = Provenance::kHardcoded;
  std::string backend;
  int repetition = -1;
  Verdict verdict = Verdict::kUnvalidated;
  // For kInvalid: the execution status name and message.
  std::string reason;
};

// Evaluates the init slices of the test to recover its hard-coded inputs.
absl::StatusOr<InputPair> HardcodedPair(const MtcModel& m,
                                        const runtime::SutRegistry& registry,
                                        const runtime::Limits& limits);

// The test body with the annotated lets bound to the pair's literals. Init
// statements that nothing else needs are dropped; asserts are untouched.
absl::StatusOr<testlang::Block> SubstituteInputs(const MtcModel& m,
                                                 const InputPair& pair);

// The test body with source lets bound to `source` and follow-up variables
// computed by calling `t` on them.
absl::StatusOr<testlang::Block> InstantiateWithTransformation(
    const MtcModel& m, const testlang::FuncDef& t, const Bindings& source);

// Canonical text of a source binding set, used for dedup.
std::string CanonicalText(const Bindings& bindings);

}  // namespace mrlift::mtc

#endif  // MRLIFT_MTC_MTC_H_
