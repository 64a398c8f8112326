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

#include "mrlift/runtime/builtins.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/str_split.h"

namespace mrlift::runtime {
namespace {

using Args = std::vector<Value>;
using BuiltinFn = Value (*)(const Args&, BuiltinState&);

[[noreturn]] void Fail(const std::string& message) { throw RuntimeFault(message); }

[[noreturn]] void TypeError(std::string_view fn, const Value& v) {
  Fail(absl::StrCat(std::string(fn), ": unsupported argument type ",
                    TypeName(v)));
}

int64_t Int(std::string_view fn, const Value& v) {
  if (!v.is_int()) {
    Fail(absl::StrCat(std::string(fn), ": expected int, got ", TypeName(v)));
  }
  return v.as_int();
}

const std::string& Str(std::string_view fn, const Value& v) {
  if (!v.is_str()) {
    Fail(absl::StrCat(std::string(fn), ": expected str, got ", TypeName(v)));
  }
  return v.as_str();
}

const ValueList& List(std::string_view fn, const Value& v) {
  if (!v.is_list()) {
    Fail(absl::StrCat(std::string(fn), ": expected list, got ", TypeName(v)));
  }
  return v.as_list();
}

double Num(std::string_view fn, const Value& v) {
  if (v.is_int()) return static_cast<double>(v.as_int());
  if (v.is_float()) return v.as_float();
  Fail(absl::StrCat(std::string(fn), ": expected number, got ", TypeName(v)));
}

void CheckSize(const BuiltinState& s, size_t n) {
  if (static_cast<int64_t>(n) > s.max_value_size) {
    Fail("value exceeds the maximum size");
  }
}

// Charges proportionally to the size of a produced value, so that builtins
// cannot do unbounded work in a single step.
void ChargeFor(BuiltinState& s, size_t n) {
  CheckSize(s, n);
  if (s.charge && n > 16) s.charge(static_cast<int64_t>(n / 16));
}

int64_t DoubleToInt(std::string_view fn, double d) {
  if (!std::isfinite(d) || d >= 9.2233720368547758e18 ||
      d < -9.2233720368547758e18) {
    Fail(absl::StrCat(std::string(fn), ": value out of int range"));
  }
  return static_cast<int64_t>(d);
}

Value Len(const Args& a, BuiltinState&) {
  if (a[0].is_str()) return static_cast<int64_t>(a[0].as_str().size());
  if (a[0].is_list()) return static_cast<int64_t>(a[0].as_list().size());
  TypeError("len", a[0]);
}

Value ToStr(const Args& a, BuiltinState& s) {
  std::string out = ToDisplayString(a[0]);
  ChargeFor(s, out.size());
  return out;
}

Value ToInt(const Args& a, BuiltinState&) {
  const Value& v = a[0];
  if (v.is_int()) return v;
  if (v.is_bool()) return static_cast<int64_t>(v.as_bool() ? 1 : 0);
  if (v.is_float()) return DoubleToInt("int", v.as_float());
  if (v.is_str()) {
    const std::string& text = v.as_str();
    int64_t out = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                     out);
    if (text.empty() || ec != std::errc() ||
        ptr != text.data() + text.size()) {
      Fail(absl::StrCat("int: cannot parse \"", text, "\""));
    }
    return out;
  }
  TypeError("int", v);
}

Value ToFloat(const Args& a, BuiltinState&) {
  const Value& v = a[0];
  if (v.is_float()) return v;
  if (v.is_int()) return static_cast<double>(v.as_int());
  if (v.is_str()) {
    const std::string& text = v.as_str();
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double out = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                     out);
    if (text.empty() || ec != std::errc() ||
        ptr != text.data() + text.size()) {
      Fail(absl::StrCat("float: cannot parse \"", text, "\""));
    }
    return out;
  }
  TypeError("float", v);
}

Value Abs(const Args& a, BuiltinState&) {
  if (a[0].is_int()) {
    if (a[0].as_int() == std::numeric_limits<int64_t>::min()) {
      Fail("abs: integer overflow");
    }
    return std::abs(a[0].as_int());
  }
  if (a[0].is_float()) return std::fabs(a[0].as_float());
  TypeError("abs", a[0]);
}

Value MinMax(const Args& a, bool want_min) {
  const char* fn = want_min ? "min" : "max";
  if (a[0].is_int() && a[1].is_int()) {
    return want_min ? std::min(a[0].as_int(), a[1].as_int())
                    : std::max(a[0].as_int(), a[1].as_int());
  }
  if (a[0].is_str() && a[1].is_str()) {
    return want_min ? std::min(a[0].as_str(), a[1].as_str())
                    : std::max(a[0].as_str(), a[1].as_str());
  }
  const double x = Num(fn, a[0]);
  const double y = Num(fn, a[1]);
  return want_min ? std::fmin(x, y) : std::fmax(x, y);
}

Value Min(const Args& a, BuiltinState&) { return MinMax(a, true); }
Value Max(const Args& a, BuiltinState&) { return MinMax(a, false); }

Value Pow(const Args& a, BuiltinState&) {
  if (a[0].is_int() && a[1].is_int()) {
    int64_t base = a[0].as_int();
    int64_t exp = a[1].as_int();
    if (exp < 0) Fail("pow: negative integer exponent");
    int64_t result = 1;
    while (exp > 0) {
      if ((exp & 1) != 0 && __builtin_mul_overflow(result, base, &result)) {
        Fail("pow: integer overflow");
      }
      exp >>= 1;
      if (exp > 0 && __builtin_mul_overflow(base, base, &base)) {
        Fail("pow: integer overflow");
      }
    }
    return result;
  }
  return std::pow(Num("pow", a[0]), Num("pow", a[1]));
}

Value Sqrt(const Args& a, BuiltinState&) {
  const double x = Num("sqrt", a[0]);
  if (x < 0) Fail("sqrt: negative argument");
  return std::sqrt(x);
}

Value Floor(const Args& a, BuiltinState&) {
  if (a[0].is_int()) return a[0];
  return DoubleToInt("floor", std::floor(Num("floor", a[0])));
}

Value Round(const Args& a, BuiltinState&) {
  if (a[0].is_int()) return a[0];
  return DoubleToInt("round", std::round(Num("round", a[0])));
}

Value Upper(const Args& a, BuiltinState& s) {
  ChargeFor(s, Str("upper", a[0]).size());
  return absl::AsciiStrToUpper(a[0].as_str());
}

Value Lower(const Args& a, BuiltinState& s) {
  ChargeFor(s, Str("lower", a[0]).size());
  return absl::AsciiStrToLower(a[0].as_str());
}

Value Trim(const Args& a, BuiltinState&) {
  return std::string(absl::StripAsciiWhitespace(Str("trim", a[0])));
}

Value Split(const Args& a, BuiltinState& s) {
  const std::string& text = Str("split", a[0]);
  const std::string& sep = Str("split", a[1]);
  ValueList out;
  if (sep.empty()) {
    for (char c : text) out.emplace_back(std::string(1, c));
  } else {
    for (absl::string_view part : absl::StrSplit(text, sep)) {
      out.emplace_back(std::string(part));
    }
  }
  ChargeFor(s, out.size() + text.size());
  return out;
}

Value Join(const Args& a, BuiltinState& s) {
  const ValueList& items = List("join", a[0]);
  const std::string& sep = Str("join", a[1]);
  std::vector<std::string> parts;
  size_t total = 0;
  for (const Value& v : items) {
    parts.push_back(Str("join", v));
    total += parts.back().size() + sep.size();
  }
  ChargeFor(s, total);
  return absl::StrJoin(parts, sep);
}

Value Substr(const Args& a, BuiltinState&) {
  const std::string& text = Str("substr", a[0]);
  const int64_t start = Int("substr", a[1]);
  const int64_t count = Int("substr", a[2]);
  const auto size = static_cast<int64_t>(text.size());
  if (start < 0 || count < 0 || start > size || count > size - start) {
    Fail(absl::StrFormat("substr: range [%d, %d+%d) out of bounds for length "
                         "%d",
                         start, start, count, size));
  }
  return text.substr(static_cast<size_t>(start), static_cast<size_t>(count));
}

Value Contains(const Args& a, BuiltinState&) {
  if (a[0].is_str()) {
    return a[0].as_str().find(Str("contains", a[1])) != std::string::npos;
  }
  for (const Value& v : List("contains", a[0])) {
    if (ValueEq(v, a[1])) return true;
  }
  return false;
}

Value IndexOf(const Args& a, BuiltinState&) {
  if (a[0].is_str()) {
    const size_t pos = a[0].as_str().find(Str("index_of", a[1]));
    return pos == std::string::npos ? int64_t{-1} : static_cast<int64_t>(pos);
  }
  const ValueList& items = List("index_of", a[0]);
  for (size_t i = 0; i < items.size(); ++i) {
    if (ValueEq(items[i], a[1])) return static_cast<int64_t>(i);
  }
  return int64_t{-1};
}

Value Replace(const Args& a, BuiltinState& s) {
  const std::string& text = Str("replace", a[0]);
  const std::string& from = Str("replace", a[1]);
  const std::string& to = Str("replace", a[2]);
  if (from.empty()) Fail("replace: empty pattern");
  std::string out = absl::StrReplaceAll(text, {{from, to}});
  ChargeFor(s, out.size());
  return out;
}

Value StartsWith(const Args& a, BuiltinState&) {
  return Str("starts_with", a[0]).starts_with(Str("starts_with", a[1]));
}

Value EndsWith(const Args& a, BuiltinState&) {
  return Str("ends_with", a[0]).ends_with(Str("ends_with", a[1]));
}

Value Reverse(const Args& a, BuiltinState& s) {
  if (a[0].is_str()) {
    ChargeFor(s, a[0].as_str().size());
    return std::string(a[0].as_str().rbegin(), a[0].as_str().rend());
  }
  const ValueList& items = List("reverse", a[0]);
  ChargeFor(s, items.size());
  return ValueList(items.rbegin(), items.rend());
}

Value Ord(const Args& a, BuiltinState&) {
  const std::string& text = Str("ord", a[0]);
  if (text.size() != 1) Fail("ord: expected a single character");
  return static_cast<int64_t>(static_cast<unsigned char>(text[0]));
}

Value Chr(const Args& a, BuiltinState&) {
  const int64_t code = Int("chr", a[0]);
  if (code < 0 || code > 255) Fail("chr: code out of range");
  return std::string(1, static_cast<char>(code));
}

Value PadLeft(const Args& a, BuiltinState& s) {
  const std::string& text = Str("pad_left", a[0]);
  const int64_t width = Int("pad_left", a[1]);
  const std::string& fill = Str("pad_left", a[2]);
  if (fill.size() != 1) Fail("pad_left: fill must be a single character");
  if (width <= static_cast<int64_t>(text.size())) return text;
  CheckSize(s, static_cast<size_t>(width));
  ChargeFor(s, static_cast<size_t>(width));
  return std::string(static_cast<size_t>(width) - text.size(), fill[0]) + text;
}

Value Push(const Args& a, BuiltinState& s) {
  ValueList out = List("push", a[0]);
  out.push_back(a[1]);
  ChargeFor(s, out.size());
  return out;
}

Value Slice(const Args& a, BuiltinState& s) {
  const int64_t start = Int("slice", a[1]);
  const int64_t end = Int("slice", a[2]);
  const int64_t size = a[0].is_str()
                           ? static_cast<int64_t>(a[0].as_str().size())
                           : static_cast<int64_t>(List("slice", a[0]).size());
  if (start < 0 || end < start || end > size) {
    Fail(absl::StrFormat("slice: range [%d, %d) out of bounds for length %d",
                         start, end, size));
  }
  ChargeFor(s, static_cast<size_t>(end - start));
  if (a[0].is_str()) {
    return a[0].as_str().substr(static_cast<size_t>(start),
                                static_cast<size_t>(end - start));
  }
  const ValueList& items = a[0].as_list();
  return ValueList(items.begin() + start, items.begin() + end);
}

Value Sort(const Args& a, BuiltinState& s) {
  ValueList items = List("sort", a[0]);
  if (items.empty()) return items;
  ChargeFor(s, items.size() * 4);
  const bool all_str = std::all_of(items.begin(), items.end(),
                                   [](const Value& v) { return v.is_str(); });
  if (all_str) {
    std::stable_sort(items.begin(), items.end(),
                     [](const Value& x, const Value& y) {
                       return x.as_str() < y.as_str();
                     });
    return items;
  }
  for (const Value& v : items) {
    if (!v.is_int() && !v.is_float()) TypeError("sort", v);
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const Value& x, const Value& y) {
                     if (x.is_int() && y.is_int()) return x.as_int() < y.as_int();
                     return Num("sort", x) < Num("sort", y);
                   });
  return items;
}

Value Sum(const Args& a, BuiltinState& s) {
  const ValueList& items = List("sum", a[0]);
  ChargeFor(s, items.size());
  bool any_float = false;
  int64_t isum = 0;
  double fsum = 0;
  for (const Value& v : items) {
    if (v.is_int()) {
      if (__builtin_add_overflow(isum, v.as_int(), &isum)) {
        Fail("sum: integer overflow");
      }
      fsum += static_cast<double>(v.as_int());
    } else if (v.is_float()) {
      any_float = true;
      fsum += v.as_float();
    } else {
      TypeError("sum", v);
    }
  }
  if (any_float) return fsum;
  return isum;
}

Value Range(const Args& a, BuiltinState& s) {
  const int64_t lo = Int("range", a[0]);
  const int64_t hi = Int("range", a[1]);
  ValueList out;
  if (hi <= lo) return out;
  // Overflow-safe width; anything this large trips the size check anyway.
  const uint64_t width = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo);
  if (s.charge) {
    s.charge(static_cast<int64_t>(std::min<uint64_t>(width, 1ULL << 62)));
  }
  CheckSize(s, static_cast<size_t>(std::min<uint64_t>(width, 1ULL << 62)));
  out.reserve(static_cast<size_t>(width));
  for (int64_t i = lo; i < hi; ++i) out.emplace_back(i);
  return out;
}

Value SetAt(const Args& a, BuiltinState& s) {
  ValueList out = List("set_at", a[0]);
  const int64_t i = Int("set_at", a[1]);
  if (i < 0 || i >= static_cast<int64_t>(out.size())) {
    Fail(absl::StrFormat("set_at: index %d out of bounds for length %d", i,
                         out.size()));
  }
  ChargeFor(s, out.size());
  out[static_cast<size_t>(i)] = a[2];
  return out;
}

// Dates: "yyyy-mm-dd" or "yyyy-mm-dd hh:mm:ss", proleptic Gregorian, years
// 1..9999.
struct DateTime {
  int64_t y = 1, m = 1, d = 1, hh = 0, mm = 0, ss = 0;
  bool has_time = false;
};

bool ParseFixed(std::string_view text, size_t pos, size_t width,
                int64_t& out) {
  if (pos + width > text.size()) return false;
  out = 0;
  for (size_t i = pos; i < pos + width; ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
    out = out * 10 + (text[i] - '0');
  }
  return true;
}

void ValidateDate(const DateTime& dt) {
  if (dt.y < 1 || dt.y > 9999) Fail("date: year out of range");
  if (dt.m < 1 || dt.m > 12) Fail("date: month out of range");
  if (dt.d < 1 || dt.d > DaysInMonth(dt.y, dt.m)) {
    Fail("date: day out of range");
  }
  if (dt.hh < 0 || dt.hh > 23 || dt.mm < 0 || dt.mm > 59 || dt.ss < 0 ||
      dt.ss > 59) {
    Fail("date: time out of range");
  }
}

DateTime ParseDateText(const std::string& text) {
  DateTime dt;
  const bool shape_ok =
      (text.size() == 10 || text.size() == 19) && text[4] == '-' &&
      text[7] == '-' && ParseFixed(text, 0, 4, dt.y) &&
      ParseFixed(text, 5, 2, dt.m) && ParseFixed(text, 8, 2, dt.d);
  if (!shape_ok) Fail(absl::StrCat("parse_date: malformed date \"", text, "\""));
  if (text.size() == 19) {
    dt.has_time = true;
    if (text[10] != ' ' || text[13] != ':' || text[16] != ':' ||
        !ParseFixed(text, 11, 2, dt.hh) || !ParseFixed(text, 14, 2, dt.mm) ||
        !ParseFixed(text, 17, 2, dt.ss)) {
      Fail(absl::StrCat("parse_date: malformed time in \"", text, "\""));
    }
  }
  ValidateDate(dt);
  return dt;
}

std::string FormatDateText(const DateTime& dt) {
  std::string out = absl::StrFormat("%04d-%02d-%02d", dt.y, dt.m, dt.d);
  if (dt.has_time) {
    absl::StrAppend(&out, absl::StrFormat(" %02d:%02d:%02d", dt.hh, dt.mm,
                                          dt.ss));
  }
  return out;
}

Value ParseDate(const Args& a, BuiltinState&) {
  const DateTime dt = ParseDateText(Str("parse_date", a[0]));
  return ValueList{dt.y, dt.m, dt.d, dt.hh, dt.mm, dt.ss};
}

Value PlusDays(const Args& a, BuiltinState&) {
  DateTime dt = ParseDateText(Str("plus_days", a[0]));
  const int64_t n = Int("plus_days", a[1]);
  if (n > 4000000 || n < -4000000) Fail("plus_days: offset out of range");
  CivilFromDays(DaysFromCivil(dt.y, dt.m, dt.d) + n, dt.y, dt.m, dt.d);
  ValidateDate(dt);
  return FormatDateText(dt);
}

Value FormatDate(const Args& a, BuiltinState&) {
  const ValueList& parts = List("format_date", a[0]);
  const std::string& style = Str("format_date", a[1]);
  if (parts.size() != 3 && parts.size() != 6) {
    Fail("format_date: expected 3 or 6 date parts");
  }
  DateTime dt;
  dt.y = Int("format_date", parts[0]);
  dt.m = Int("format_date", parts[1]);
  dt.d = Int("format_date", parts[2]);
  if (parts.size() == 6) {
    dt.hh = Int("format_date", parts[3]);
    dt.mm = Int("format_date", parts[4]);
    dt.ss = Int("format_date", parts[5]);
  }
  ValidateDate(dt);
  static constexpr std::array<const char*, 12> kMonths = {
      "Jan", "Feb", "Mar", "Apr", "May", "Jun",
      "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  if (style == "long") {
    dt.has_time = true;
    return FormatDateText(dt);
  }
  if (style == "iso") return FormatDateText(dt);
  if (style == "medium") {
    return absl::StrFormat("%s %d, %d", kMonths[dt.m - 1], dt.d, dt.y);
  }
  Fail(absl::StrCat("format_date: unknown style \"", style, "\""));
}

Value NowTicks(const Args&, BuiltinState& s) { return s.clock++; }

uint64_t SplitMix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Value RandInt(const Args& a, BuiltinState& s) {
  const int64_t lo = Int("rand_int", a[0]);
  const int64_t hi = Int("rand_int", a[1]);
  if (hi < lo) Fail("rand_int: empty range");
  const uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo);
  const uint64_t r = SplitMix64(s.rng);
  if (span == std::numeric_limits<uint64_t>::max()) {
    return static_cast<int64_t>(r);
  }
  return static_cast<int64_t>(static_cast<uint64_t>(lo) + r % (span + 1));
}

Value TypeOf(const Args& a, BuiltinState&) { return TypeName(a[0]); }

Value Unpack(const Args& a, BuiltinState&) {
  const ValueList& items = List("unpack", a[0]);
  const int64_t k = Int("unpack", a[1]);
  if (static_cast<int64_t>(items.size()) != k) {
    Fail(absl::StrFormat("unpack: expected a list of %d values, got %d", k,
                         items.size()));
  }
  return a[0];
}

const std::map<std::string_view, BuiltinFn>& Table() {
  static const auto* table = new std::map<std::string_view, BuiltinFn>{
      {"len", Len},         {"str", ToStr},
      {"int", ToInt},       {"float", ToFloat},
      {"abs", Abs},         {"min", Min},
      {"max", Max},         {"pow", Pow},
      {"sqrt", Sqrt},       {"floor", Floor},
      {"round", Round},     {"upper", Upper},
      {"lower", Lower},     {"trim", Trim},
      {"split", Split},     {"join", Join},
      {"substr", Substr},   {"contains", Contains},
      {"index_of", IndexOf}, {"replace", Replace},
      {"starts_with", StartsWith}, {"ends_with", EndsWith},
      {"reverse", Reverse}, {"ord", Ord},
      {"chr", Chr},         {"pad_left", PadLeft},
      {"push", Push},       {"slice", Slice},
      {"sort", Sort},       {"sum", Sum},
      {"range", Range},     {"set_at", SetAt},
      {"parse_date", ParseDate}, {"plus_days", PlusDays},
      {"format_date", FormatDate}, {"now_ticks", NowTicks},
      {"rand_int", RandInt}, {"type_of", TypeOf},
      {"unpack", Unpack},
  };
  return *table;
}

}  // namespace

bool IsLeapYear(int64_t y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int64_t DaysInMonth(int64_t y, int64_t m) {
  static constexpr std::array<int64_t, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                    31, 31, 30, 31, 30, 31};
  if (m == 2 && IsLeapYear(y)) return 29;
  return kDays[static_cast<size_t>(m - 1)];
}

// Howard Hinnant's days_from_civil / civil_from_days.
int64_t DaysFromCivil(int64_t y, int64_t m, int64_t d) {
  y -= m <= 2 ? 1 : 0;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const int64_t yoe = y - era * 400;
  const int64_t doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

void CivilFromDays(int64_t z, int64_t& y, int64_t& m, int64_t& d) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const int64_t doe = z - era * 146097;
  const int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const int64_t mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y = yoe + era * 400 + (m <= 2 ? 1 : 0);
}

Value CallBuiltin(std::string_view name, const std::vector<Value>& args,
                  BuiltinState& state) {
  const auto& table = Table();
  auto it = table.find(name);
  if (it == table.end()) {
    Fail(absl::StrCat("unresolved name '", std::string(name), "'"));
  }
  return it->second(args, state);
}

}  // namespace mrlift::runtime
