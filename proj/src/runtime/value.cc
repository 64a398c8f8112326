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

#include "mrlift/runtime/value.h"

#include <bit>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "mrlift/testlang/printer.h"

namespace mrlift::runtime {

using testlang::Expr;

bool ValueEq(const Value& a, const Value& b) {
  if (a.v.index() != b.v.index()) return false;
  if (a.is_float()) {
    const double x = a.as_float();
    const double y = b.as_float();
    if (std::isnan(x) || std::isnan(y)) return false;
    return std::bit_cast<uint64_t>(x) == std::bit_cast<uint64_t>(y);
  }
  if (a.is_list()) {
    const ValueList& x = a.as_list();
    const ValueList& y = b.as_list();
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i) {
      if (!ValueEq(x[i], y[i])) return false;
    }
    return true;
  }
  if (a.is_int()) return a.as_int() == b.as_int();
  if (a.is_bool()) return a.as_bool() == b.as_bool();
  if (a.is_str()) return a.as_str() == b.as_str();
  return true;
}

bool BindingsEq(const Bindings& a, const Bindings& b) {
  if (a.size() != b.size()) return false;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !ValueEq(ia->second, ib->second)) {
      return false;
    }
  }
  return true;
}

const char* TypeName(const Value& v) {
  switch (v.v.index()) {
    case 0: return "int";
    case 1: return "float";
    case 2: return "bool";
    case 3: return "str";
    case 4: return "list";
    default: return "unit";
  }
}

namespace {

Expr Negate(Expr e) {
  return Expr{testlang::UnaryExpr{testlang::UnaryOp::kNeg, std::move(e)}, {}};
}

}  // namespace

Expr Literalize(const Value& v) {
  if (v.is_int()) {
    const int64_t i = v.as_int();
    if (i == std::numeric_limits<int64_t>::min()) {
      Expr max_neg = Negate(Expr{testlang::IntLit{
          std::numeric_limits<int64_t>::max()}, {}});
      return Expr{testlang::BinaryExpr{testlang::BinaryOp::kSub,
                                       std::move(max_neg),
                                       Expr{testlang::IntLit{1}, {}}},
                  {}};
    }
    if (i < 0) return Negate(Expr{testlang::IntLit{-i}, {}});
    return Expr{testlang::IntLit{i}, {}};
  }
  if (v.is_float()) {
    const double d = v.as_float();
    if (std::isnan(d)) {
      return testlang::MakeCall("float", {Expr{testlang::StrLit{"nan"}, {}}});
    }
    if (std::isinf(d)) {
      Expr inf =
          testlang::MakeCall("float", {Expr{testlang::StrLit{"inf"}, {}}});
      return d < 0 ? Negate(std::move(inf)) : inf;
    }
    if (std::signbit(d)) return Negate(Expr{testlang::FloatLit{-d}, {}});
    return Expr{testlang::FloatLit{d}, {}};
  }
  if (v.is_bool()) return Expr{testlang::BoolLit{v.as_bool()}, {}};
  if (v.is_str()) return Expr{testlang::StrLit{v.as_str()}, {}};
  if (v.is_list()) {
    testlang::ListExpr list;
    for (const Value& item : v.as_list()) list.items.push_back(Literalize(item));
    return Expr{std::move(list), {}};
  }
  return Expr{testlang::UnitLit{}, {}};
}

std::string LiteralText(const Value& v) {
  return testlang::PrintExpr(Literalize(v));
}

std::string ToDisplayString(const Value& v) {
  if (v.is_int()) return absl::StrCat(v.as_int());
  if (v.is_float()) {
    const double d = v.as_float();
    if (std::isnan(d)) return "nan";
    if (std::isinf(d)) return d < 0 ? "-inf" : "inf";
    return testlang::FormatFloat(d);
  }
  if (v.is_bool()) return v.as_bool() ? "true" : "false";
  if (v.is_str()) return v.as_str();
  if (v.is_list()) return LiteralText(v);
  return "unit";
}

}  // namespace mrlift::runtime
