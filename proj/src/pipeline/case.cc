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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "mrlift/pipeline/pipeline.h"
#include "mrlift/testlang/parser.h"

namespace mrlift::pipeline {

namespace fs = std::filesystem;

namespace {

absl::StatusOr<std::string> Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::Status CheckFailed(const std::string& file,
                         const testlang::CheckReport& report) {
  std::vector<std::string> lines;
  for (const testlang::Diagnostic& d : report.diagnostics) {
    if (d.severity == testlang::Severity::kError) {
      lines.push_back(absl::StrCat(file, ":", testlang::FormatDiagnostic(d)));
    }
  }
  return absl::FailedPreconditionError(absl::StrJoin(lines, "\n"));
}

}  // namespace

absl::StatusOr<Case> LoadCase(const std::string& dir) {
  Case c;
  c.dir = dir;
  c.name = fs::path(dir).filename().string();
  if (c.name.empty()) c.name = fs::path(dir).parent_path().filename().string();

  absl::StatusOr<std::string> sut = Slurp(fs::path(dir) / "sut.mtl");
  if (!sut.ok()) return sut.status();
  absl::StatusOr<std::string> mtc_text = Slurp(fs::path(dir) / "mtc.mtl");
  if (!mtc_text.ok()) return mtc_text.status();
  c.sut_text = *sut;
  c.mtc_text = *mtc_text;

  absl::StatusOr<testlang::Program> sut_program =
      testlang::ParseProgram(c.sut_text, testlang::FuncOrigin::kSut);
  if (!sut_program.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("sut.mtl: ", std::string(sut_program.status().message())));
  }
  if (testlang::CheckReport r = testlang::CheckProgram(*sut_program, {});
      !r.ok) {
    return CheckFailed("sut.mtl", r);
  }
  c.registry = runtime::SutRegistry(*std::move(sut_program));

  absl::StatusOr<testlang::Program> program =
      testlang::ParseProgram(c.mtc_text, testlang::FuncOrigin::kHelper);
  if (!program.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("mtc.mtl: ", std::string(program.status().message())));
  }
  if (testlang::CheckReport r =
          testlang::CheckProgram(*program, c.registry.signatures());
      !r.ok) {
    return CheckFailed("mtc.mtl", r);
  }
  c.mtc_program = *std::move(program);

  if (fs::exists(fs::path(dir) / "meta.json")) {
    absl::StatusOr<std::string> meta = Slurp(fs::path(dir) / "meta.json");
    if (!meta.ok()) return meta.status();
    c.meta = nlohmann::json::parse(*meta, nullptr, false);
    if (c.meta.is_discarded() || !c.meta.is_object()) {
      return absl::InvalidArgumentError("meta.json: not a JSON object");
    }
  }

  std::string test_name;
  if (c.meta.contains("test")) {
    test_name = c.meta["test"].get<std::string>();
  } else {
    const std::vector<std::string> tests = mtc::AnnotatedTests(c.mtc_program);
    if (tests.size() != 1) {
      return absl::FailedPreconditionError(absl::StrCat(
          "extraction: expected one annotated test in mtc.mtl, found ",
          tests.size()));
    }
    test_name = tests[0];
  }
  absl::StatusOr<mtc::MtcModel> model =
      mtc::ExtractMtc(c.mtc_program, test_name, c.registry);
  if (!model.ok()) return model.status();
  c.model = *std::move(model);

  if (fs::exists(fs::path(dir) / "ground_truth.mtl")) {
    absl::StatusOr<std::string> gt = Slurp(fs::path(dir) / "ground_truth.mtl");
    if (!gt.ok()) return gt.status();
    absl::StatusOr<testlang::Program> gp =
        testlang::ParseProgram(*gt, testlang::FuncOrigin::kTransformation);
    if (!gp.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "ground_truth.mtl: ", std::string(gp.status().message())));
    }
    const mtc::TransformationSkeleton sk = mtc::DeriveSkeleton(c.model);
    const testlang::FuncDef* fn = gp->FindFunction(sk.fn_name);
    if (fn == nullptr) {
      return absl::InvalidArgumentError(absl::StrCat(
          "ground_truth.mtl: no function '", sk.fn_name, "'"));
    }
    if (absl::Status s = mtc::MatchSkeleton(*fn, sk); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("ground_truth.mtl: ", std::string(s.message())));
    }
    c.ground_truth = *fn;
  }
  return c;
}

std::vector<std::string> DiscoverCases(const std::string& corpus_dir) {
  std::vector<std::string> out;
  std::error_code ec;
  if (!fs::is_directory(corpus_dir, ec)) return out;
  for (const fs::directory_entry& e : fs::directory_iterator(corpus_dir, ec)) {
    if (e.is_directory() && fs::exists(e.path() / "mtc.mtl")) {
      out.push_back(e.path().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mrlift::pipeline
