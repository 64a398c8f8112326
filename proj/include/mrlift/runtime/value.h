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

#ifndef MRLIFT_RUNTIME_VALUE_H_
#define MRLIFT_RUNTIME_VALUE_H_

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mrlift/testlang/ast.h"

namespace mrlift::runtime {

struct Unit {
  friend bool operator==(const Unit&, const Unit&) { return true; }
};

struct Value;
using ValueList = std::vector<Value>;

// Dynamically typed MTL value.
struct Value {
  std::variant<int64_t, double, bool, std::string, ValueList, Unit> v;

  Value() : v(Unit{}) {}
  Value(int64_t i) : v(i) {}                    // NOLINT
  Value(int i) : v(static_cast<int64_t>(i)) {}  // NOLINT
  Value(double d) : v(d) {}                     // NOLINT
  Value(bool b) : v(b) {}                       // NOLINT
  Value(std::string s) : v(std::move(s)) {}     // NOLINT
  Value(const char* s) : v(std::string(s)) {}   // NOLINT
  Value(ValueList l) : v(std::move(l)) {}       // NOLINT
  Value(Unit u) : v(u) {}                       // NOLINT

  bool is_int() const { return std::holds_alternative<int64_t>(v); }
  bool is_float() const { return std::holds_alternative<double>(v); }
  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_str() const { return std::holds_alternative<std::string>(v); }
  bool is_list() const { return std::holds_alternative<ValueList>(v); }
  bool is_unit() const { return std::holds_alternative<Unit>(v); }

  int64_t as_int() const { return std::get<int64_t>(v); }
  double as_float() const { return std::get<double>(v); }
  bool as_bool() const { return std::get<bool>(v); }
  const std::string& as_str() const { return std::get<std::string>(v); }
  const ValueList& as_list() const { return std::get<ValueList>(v); }
};

// Ordered so that anything derived from a binding set is deterministic.
using Bindings = std::map<std::string, Value>;

// Structural equality: cross-variant values are never equal, floats compare
// exactly with NaN unequal to everything, lists compare elementwise.
bool ValueEq(const Value& a, const Value& b);
bool BindingsEq(const Bindings& a, const Bindings& b);

const char* TypeName(const Value& v);

// MTL expression that evaluates to `v`. Negative numbers become a negated
// literal, INT64_MIN becomes `(-9223372036854775807 - 1)` and non-finite
// floats become `float("nan")` / `float("inf")` calls.
testlang::Expr Literalize(const Value& v);

// Canonical printed form of Literalize(v); used for dedup and reports.
std::string LiteralText(const Value& v);

// Text produced by the `str` builtin.
std::string ToDisplayString(const Value& v);

}  // namespace mrlift::runtime

#endif  // MRLIFT_RUNTIME_VALUE_H_
