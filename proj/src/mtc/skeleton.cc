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

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "mrlift/mtc/mtc.h"
#include "mrlift/testlang/printer.h"

namespace mrlift::mtc {

using testlang::FuncDef;
using testlang::TypeAnn;

TransformationSkeleton DeriveSkeleton(const MtcModel& m) {
  TransformationSkeleton s;
  s.fn_name = absl::StrCat("transform_", m.test_name);
  for (size_t i = 0; i < m.source_vars.size(); ++i) {
    s.params.push_back(testlang::Param{m.source_vars[i], m.source_types[i]});
  }
  s.arity_out = static_cast<int>(m.followup_vars.size());
  if (s.arity_out == 1) {
    s.shape = ReturnShape::kSingle;
    s.return_type = m.followup_types[0];
  } else {
    s.shape = ReturnShape::kList;
    s.return_type = TypeAnn{"list", {}};
  }
  return s;
}

std::string PrintSkeleton(const TransformationSkeleton& s) {
  std::vector<std::string> params;
  for (const testlang::Param& p : s.params) {
    params.push_back(p.type ? absl::StrCat(p.name, ": ",
                                           testlang::PrintType(*p.type))
                            : p.name);
  }
  std::string ret =
      s.return_type ? absl::StrCat(" -> ", testlang::PrintType(*s.return_type))
                    : "";
  std::string hint =
      s.shape == ReturnShape::kList
          ? absl::StrCat("  // return a list of ", s.arity_out,
                         " follow-up values, in declaration order\n")
          : "  // return the follow-up value\n";
  return absl::StrCat("#[transformation]\nfn ", s.fn_name, "(",
                      absl::StrJoin(params, ", "), ")", ret, " {\n", hint,
                      "}\n");
}

absl::Status MatchSkeleton(const FuncDef& fn, const TransformationSkeleton& s) {
  if (fn.name != s.fn_name) {
    return absl::InvalidArgumentError(absl::StrCat(
        "skeleton: expected function '", s.fn_name, "', got '", fn.name, "'"));
  }
  if (fn.params.size() != s.params.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "skeleton: '", s.fn_name, "' takes ", s.params.size(),
        " parameter(s), got ", fn.params.size()));
  }
  if (s.shape == ReturnShape::kList) {
    if (fn.return_type && fn.return_type->name != "list") {
      return absl::InvalidArgumentError(absl::StrCat(
          "skeleton: '", s.fn_name, "' must return a list, declared ",
          testlang::PrintType(*fn.return_type)));
    }
    absl::Status shape = absl::OkStatus();
    testlang::ForEachStmt(
        fn.body, [&](const testlang::Stmt& st, const StmtPath&) {
          const auto* r = std::get_if<testlang::ReturnStmt>(&st.node);
          if (r == nullptr || !r->value) return;
          const auto* lit = std::get_if<testlang::ListExpr>(&r->value->node);
          if (lit != nullptr &&
              static_cast<int>(lit->items.size()) != s.arity_out) {
            shape = absl::InvalidArgumentError(absl::StrCat(
                "skeleton: '", s.fn_name, "' must return ", s.arity_out,
                " values, a return lists ", lit->items.size()));
          }
        });
    if (!shape.ok()) return shape;
  }
  return absl::OkStatus();
}

}  // namespace mrlift::mtc
