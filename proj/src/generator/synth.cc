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

// SYNTH: an offline stand-in for a language model. Inputs are produced by
// seeded perturbation of the hard-coded ones; follow-ups and
// transformations come from a small bottom-up enumerative synthesizer that
// searches for an expression consistent with the example pairs.

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mrlift/generator/generator.h"
#include "mrlift/runtime/builtins.h"
#include "mrlift/runtime/interpreter.h"
#include "mrlift/testlang/builtins.h"
#include "mrlift/testlang/printer.h"

namespace mrlift::generator {

using runtime::Bindings;
using runtime::Value;
using runtime::ValueList;
using testlang::Block;
using testlang::Expr;
using testlang::FuncDef;
using testlang::Stmt;

namespace {

uint64_t Mix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t HashString(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}
  uint64_t Next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return Mix(state_);
  }
  // Uniform in [lo, hi].
  int64_t Range(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(Next() % static_cast<uint64_t>(hi - lo + 1));
  }
  double Unit() { return static_cast<double>(Next() >> 11) / 9007199254740992.0; }
  bool Chance(double p) { return Unit() < p; }

 private:
  uint64_t state_;
};

// Per-slot category indices: exact counts by largest remainder, then a
// seeded shuffle.
std::vector<int> Allot(const std::vector<double>& weights, int n, Rng& rng) {
  double total = 0;
  for (double w : weights) total += w;
  std::vector<int> counts(weights.size(), 0);
  if (total <= 0) {
    counts[0] = n;
  } else {
    std::vector<std::pair<double, int>> remainders;
    int assigned = 0;
    for (size_t i = 0; i < weights.size(); ++i) {
      const double exact = weights[i] / total * n;
      counts[i] = static_cast<int>(std::floor(exact));
      assigned += counts[i];
      remainders.push_back({exact - counts[i], static_cast<int>(i)});
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (int i = 0; assigned < n; ++i, ++assigned) {
      ++counts[remainders[i % remainders.size()].second];
    }
  }
  std::vector<int> slots;
  for (size_t i = 0; i < counts.size(); ++i) {
    slots.insert(slots.end(), counts[i], static_cast<int>(i));
  }
  for (int i = static_cast<int>(slots.size()) - 1; i > 0; --i) {
    std::swap(slots[i], slots[rng.Range(0, i)]);
  }
  return slots;
}

// ---- input perturbation ----

bool ParseDateLike(const std::string& s, bool& with_time) {
  auto digits = [&](size_t from, size_t n) {
    for (size_t i = from; i < from + n; ++i) {
      if (i >= s.size() || s[i] < '0' || s[i] > '9') return false;
    }
    return true;
  };
  if (s.size() != 10 && s.size() != 19) return false;
  if (!digits(0, 4) || s[4] != '-' || !digits(5, 2) || s[7] != '-' ||
      !digits(8, 2)) {
    return false;
  }
  with_time = s.size() == 19;
  if (with_time && (s[10] != ' ' || !digits(11, 2) || s[13] != ':' ||
                    !digits(14, 2) || s[16] != ':' || !digits(17, 2))) {
    return false;
  }
  return true;
}

std::string RandomDate(Rng& rng, bool with_time) {
  const int64_t y = rng.Range(1990, 2035);
  const int64_t m = rng.Range(1, 12);
  const int64_t d = rng.Range(1, runtime::DaysInMonth(y, m));
  std::string out = absl::StrFormat("%04d-%02d-%02d", y, m, d);
  if (with_time) {
    absl::StrAppendFormat(&out, " %02d:%02d:%02d", rng.Range(0, 23),
                          rng.Range(0, 59), rng.Range(0, 59));
  }
  return out;
}

Value Perturb(const Value& v, Rng& rng);

std::string PerturbString(const std::string& s, Rng& rng) {
  bool with_time = false;
  if (ParseDateLike(s, with_time)) return RandomDate(rng, with_time);
  std::string alphabet = s.empty() ? std::string("abcxyz") : s;
  alphabet += "abcdefghijklmnopqrstuvwxyz";
  std::string out = s;
  const int edits = static_cast<int>(rng.Range(1, 3));
  for (int e = 0; e < edits; ++e) {
    const char c = alphabet[rng.Range(0, alphabet.size() - 1)];
    const int64_t op = out.empty() ? 0 : rng.Range(0, 2);
    const size_t at = out.empty() ? 0 : rng.Range(0, out.size() - 1);
    if (op == 0) {
      out.insert(out.begin() + (out.empty() ? 0 : rng.Range(0, out.size())), c);
    } else if (op == 1) {
      out[at] = c;
    } else {
      out.erase(at, 1);
    }
  }
  return out;
}

Value Perturb(const Value& v, Rng& rng) {
  if (v.is_int()) {
    const int64_t x = v.as_int();
    switch (rng.Range(0, 3)) {
      case 0: {
        int64_t d = rng.Range(-10, 9);
        return x + (d >= 0 ? d + 1 : d);
      }
      case 1:
        return x > -1000000 && x < 1000000 ? x * 2 + 1 : x - 1;
      case 2:
        return rng.Range(-100, 100);
      default:
        return rng.Range(0, 1000);
    }
  }
  if (v.is_float()) {
    const double x = v.as_float() + static_cast<double>(rng.Range(-1000, 1000)) / 100.0;
    return std::round(x * 100.0) / 100.0;
  }
  if (v.is_bool()) return !v.as_bool();
  if (v.is_str()) return PerturbString(v.as_str(), rng);
  if (v.is_list()) {
    ValueList out = v.as_list();
    for (Value& item : out) {
      if (rng.Chance(0.5)) item = Perturb(item, rng);
    }
    if (!out.empty() && rng.Chance(0.3)) {
      out.push_back(Perturb(out[rng.Range(0, out.size() - 1)], rng));
    } else if (out.size() > 1 && rng.Chance(0.3)) {
      out.erase(out.begin() + rng.Range(0, out.size() - 1));
    }
    return out;
  }
  return v;
}

// ---- enumerative synthesis ----

struct Example {
  std::vector<Value> in;
  Value out;
};

std::string Signature(const std::vector<Value>& vals) {
  std::string key;
  for (const Value& v : vals) {
    absl::StrAppend(&key, runtime::TypeName(v), ":", runtime::LiteralText(v),
                    "\x1f");
  }
  return key;
}

class Enumerator {
 public:
  Enumerator(std::vector<std::string> params, std::vector<Example> examples,
             const std::vector<Value>& constants,
             const testlang::Program& helpers,
             const runtime::SutRegistry& registry,
             std::optional<size_t> only_param = std::nullopt)
      : params_(std::move(params)),
        examples_(std::move(examples)),
        helpers_(helpers),
        registry_(registry) {
    limits_.max_steps = 4000;
    limits_.max_call_depth = 40;
    limits_.max_value_size = 4096;
    for (size_t i = 0; i < params_.size(); ++i) {
      if (only_param && *only_param != i) continue;
      std::vector<Value> vals;
      for (const Example& e : examples_) vals.push_back(e.in[i]);
      Add(testlang::MakeVar(params_[i]), std::move(vals), 0, true);
    }
    for (const Value& c : constants) {
      Add(runtime::Literalize(c), std::vector<Value>(examples_.size(), c), 0,
          false);
    }
  }

  // An expression matching every example, else the one matching the most
  // examples when it matches the first (trusted) one and at least
  // `min_share` of all.
  std::optional<Expr> Run(int max_level, double min_share) {
    for (int level = 1; level <= max_level && !found_ && budget_ > 0;
         ++level) {
      Grow(level);
    }
    if (found_) return found_;
    const size_t n = examples_.size();
    if (best_ && n >= 3 &&
        static_cast<double>(best_count_) >= min_share * static_cast<double>(n)) {
      return best_;
    }
    return std::nullopt;
  }

 private:
  struct Entry {
    Expr expr;
    std::vector<Value> vals;
    int level;
    // Reads a parameter. Only such expressions may answer the search: a
    // constant that happens to fit the examples is memorization.
    bool reads_param;
  };

  struct Op {
    std::string name;
    int arity;
    // Builds the node from its children.
    std::function<Expr(std::vector<Expr>)> build;
    FuncDef fn;
  };

  void Add(Expr expr, std::vector<Value> vals, int level, bool reads_param) {
    if (found_) return;
    std::string sig = absl::StrCat(reads_param ? "p|" : "c|", Signature(vals));
    if (!seen_.insert(sig).second) return;
    size_t matches = 0;
    for (size_t i = 0; i < examples_.size(); ++i) {
      if (runtime::ValueEq(vals[i], examples_[i].out)) ++matches;
    }
    if (reads_param && matches == examples_.size()) {
      found_ = expr;
      return;
    }
    if (reads_param && matches > best_count_ && !examples_.empty() &&
        runtime::ValueEq(vals[0], examples_[0].out)) {
      best_ = expr;
      best_count_ = matches;
    }
    if (entries_.size() < kMaxEntries) {
      entries_.push_back(
          Entry{std::move(expr), std::move(vals), level, reads_param});
    }
  }

  static Op MakeOp(std::string name, int arity,
                   std::function<Expr(std::vector<Expr>)> build) {
    Op op{std::move(name), arity, std::move(build), {}};
    std::vector<Expr> args;
    for (int i = 0; i < arity; ++i) {
      const std::string p = absl::StrCat("x", i);
      op.fn.params.push_back(testlang::Param{p, std::nullopt});
      args.push_back(testlang::MakeVar(p));
    }
    op.fn.name = "__op";
    Stmt ret;
    ret.node = testlang::ReturnStmt{op.build(std::move(args))};
    op.fn.body.stmts.push_back(std::move(ret));
    return op;
  }

  std::vector<Op> Ops() const {
    std::vector<Op> ops;
    using testlang::BinaryOp;
    const std::pair<BinaryOp, const char*> binary[] = {
        {BinaryOp::kAdd, "+"}, {BinaryOp::kSub, "-"}, {BinaryOp::kMul, "*"},
        {BinaryOp::kDiv, "/"}, {BinaryOp::kMod, "%"}};
    for (const auto& [op, text] : binary) {
      ops.push_back(MakeOp(text, 2, [op = op](std::vector<Expr> a) {
        return Expr{testlang::BinaryExpr{op, std::move(a[0]), std::move(a[1])}};
      }));
    }
    ops.push_back(MakeOp("neg", 1, [](std::vector<Expr> a) {
      return Expr{testlang::UnaryExpr{testlang::UnaryOp::kNeg, std::move(a[0])}};
    }));
    bool want_bool = !examples_.empty() && examples_[0].out.is_bool();
    if (want_bool) {
      ops.push_back(MakeOp("not", 1, [](std::vector<Expr> a) {
        return Expr{testlang::UnaryExpr{testlang::UnaryOp::kNot, std::move(a[0])}};
      }));
    }
    ops.push_back(MakeOp("[]", 2, [](std::vector<Expr> a) {
      return testlang::MakeIndex(std::move(a[0]), std::move(a[1]));
    }));
    static const std::set<std::string, std::less<>> kSkip = {
        "now_ticks", "rand_int", "range", "unpack", "type_of", "str"};
    for (const testlang::BuiltinInfo& b : testlang::AllBuiltins()) {
      if (b.stateful || b.arity == 0 || b.arity > 3 ||
          kSkip.count(b.name) != 0) {
        continue;
      }
      std::string name(b.name);
      ops.push_back(MakeOp(name, b.arity, [name](std::vector<Expr> a) {
        return testlang::MakeCall(name, std::move(a));
      }));
    }
    for (const FuncDef& h : helpers_.functions) {
      const int arity = static_cast<int>(h.params.size());
      if (arity == 0 || arity > 3) continue;
      std::string name = h.name;
      ops.push_back(MakeOp(name, arity, [name](std::vector<Expr> a) {
        return testlang::MakeCall(name, std::move(a));
      }));
    }
    return ops;
  }

  bool Evaluate(const Op& op, const std::vector<const Entry*>& kids,
                std::vector<Value>& out) {
    out.clear();
    for (size_t i = 0; i < examples_.size(); ++i) {
      if (--budget_ < 0) return false;
      std::vector<Value> args;
      for (const Entry* k : kids) args.push_back(k->vals[i]);
      runtime::CallOutcome r =
          runtime::CallFunction(op.fn, args, registry_, limits_, &helpers_);
      if (r.status != runtime::ExecStatus::kOk) return false;
      out.push_back(std::move(r.value));
    }
    return true;
  }

  void Apply(const Op& op, const std::vector<const Entry*>& kids, int level) {
    std::vector<Value> vals;
    if (!Evaluate(op, kids, vals)) return;
    std::vector<Expr> args;
    bool reads_param = false;
    for (const Entry* k : kids) {
      args.push_back(k->expr);
      reads_param = reads_param || k->reads_param;
    }
    Add(op.build(std::move(args)), std::move(vals), level, reads_param);
  }

  // Level L combines one child of level L-1 with terminals, so the search
  // stays linear in the number of level L-1 entries.
  void Grow(int level) {
    const std::vector<Op> ops = Ops();
    const size_t n = entries_.size();
    std::vector<size_t> fresh;
    std::vector<size_t> terminals;
    for (size_t i = 0; i < n; ++i) {
      if (entries_[i].level == level - 1) fresh.push_back(i);
      if (entries_[i].level == 0) terminals.push_back(i);
    }
    for (const Op& op : ops) {
      for (size_t f : fresh) {
        if (found_ || budget_ <= 0) return;
        if (op.arity == 1) {
          Apply(op, {&entries_[f]}, level);
          continue;
        }
        for (int slot = 0; slot < op.arity; ++slot) {
          // Every other argument position takes a terminal.
          std::vector<size_t> idx(op.arity, 0);
          std::function<void(int)> rec = [&](int pos) {
            if (found_ || budget_ <= 0) return;
            if (pos == op.arity) {
              std::vector<const Entry*> kids;
              for (size_t i : idx) kids.push_back(&entries_[i]);
              Apply(op, kids, level);
              return;
            }
            if (pos == slot) {
              idx[pos] = f;
              rec(pos + 1);
              return;
            }
            for (size_t t : terminals) {
              // Avoid enumerating the same combination twice when the
              // fresh entry is itself a terminal.
              if (level == 1 && pos < slot && t == f) continue;
              idx[pos] = t;
              rec(pos + 1);
            }
          };
          rec(0);
          if (level == 1 && op.arity > 1) {
            // At level 1 every argument is a terminal; one slot suffices.
            break;
          }
        }
      }
    }
  }

  static constexpr size_t kMaxEntries = 6000;

  std::vector<std::string> params_;
  std::vector<Example> examples_;
  const testlang::Program& helpers_;
  const runtime::SutRegistry& registry_;
  runtime::Limits limits_;
  std::vector<Entry> entries_;
  std::unordered_set<std::string> seen_;
  std::optional<Expr> found_;
  std::optional<Expr> best_;
  size_t best_count_ = 0;
  int64_t budget_ = 400000;
};

void CollectConstants(const Block& block, std::vector<Value>& out) {
  testlang::ForEachStmt(block, [&](const Stmt& s, const testlang::StmtPath&) {
    for (const Expr* e : testlang::DirectExprs(s)) {
      testlang::ForEachExpr(*e, [&](const Expr& sub) {
        if (const auto* i = std::get_if<testlang::IntLit>(&sub.node)) {
          out.push_back(i->value);
        } else if (const auto* st = std::get_if<testlang::StrLit>(&sub.node)) {
          out.push_back(st->value);
        }
      });
    }
  });
}

std::vector<Value> Constants(const mtc::MtcModel& m,
                             const runtime::SutRegistry& registry,
                             const std::vector<Value>& followup_values) {
  std::vector<Value> raw = {int64_t{0}, int64_t{1}, int64_t{2},
                            int64_t{-1}, std::string(""), std::string(" ")};
  CollectConstants(m.full_body, raw);
  for (const FuncDef& h : m.helpers) CollectConstants(h.body, raw);
  for (const FuncDef& f : registry.program().functions) {
    CollectConstants(f.body, raw);
  }
  std::vector<Value> out;
  std::set<std::string> seen;
  for (size_t i = 0; i < raw.size(); ++i) {
    const Value& c = raw[i];
    // Small integers stay; anything that simply restates an expected output
    // would let the search memorize instead of generalize.
    bool is_output = false;
    for (const Value& f : followup_values) {
      if (runtime::ValueEq(c, f)) is_output = true;
    }
    if (is_output && i >= 4) continue;
    if (seen.insert(Signature({c})).second) out.push_back(c);
  }
  return out;
}

std::optional<Expr> Synthesize(const mtc::MtcModel& m,
                               const runtime::SutRegistry& registry,
                               const std::vector<mtc::InputPair>& pairs,
                               const std::string& followup_var) {
  std::vector<Example> examples;
  std::set<std::string> seen;
  for (const mtc::InputPair& p : pairs) {
    Example e;
    bool complete = true;
    for (const std::string& v : m.source_vars) {
      auto it = p.source.find(v);
      if (it == p.source.end()) complete = false;
      else e.in.push_back(it->second);
    }
    auto out = p.followup.find(followup_var);
    if (!complete || out == p.followup.end()) continue;
    e.out = out->second;
    if (!seen.insert(Signature(e.in)).second) continue;
    examples.push_back(std::move(e));
  }
  if (examples.empty()) return std::nullopt;
  std::vector<Value> followup_values;
  for (const mtc::InputPair& p : pairs) {
    for (const auto& [name, v] : p.followup) followup_values.push_back(v);
  }
  const std::vector<Value> constants = Constants(m, registry, followup_values);
  const testlang::Program helpers = mtc::HelperProgram(m);
  // With several inputs, the follow-up usually derives from the source
  // variable in the same position; try that one alone first.
  const auto pos = std::find(m.followup_vars.begin(), m.followup_vars.end(),
                             followup_var);
  const size_t index = static_cast<size_t>(pos - m.followup_vars.begin());
  if (m.source_vars.size() > 1 && index < m.source_vars.size()) {
    Enumerator narrow(m.source_vars, examples, constants, helpers, registry,
                      index);
    if (std::optional<Expr> e = narrow.Run(2, 1.0)) return e;
  }
  Enumerator en(m.source_vars, examples, constants, helpers, registry);
  return en.Run(3, 0.6);
}

// ---- rendering ----

Stmt ReturnOf(Expr e) {
  Stmt s;
  s.node = testlang::ReturnStmt{std::move(e)};
  return s;
}

Expr ListOf(std::vector<Expr> items) {
  return Expr{testlang::ListExpr{std::move(items)}};
}

FuncDef SkeletonFunction(const mtc::TransformationSkeleton& sk) {
  FuncDef fn;
  fn.name = sk.fn_name;
  fn.params = sk.params;
  fn.return_type = sk.return_type;
  fn.origin = testlang::FuncOrigin::kTransformation;
  return fn;
}

Expr Conj(const std::vector<std::string>& vars, const Bindings& values) {
  std::optional<Expr> out;
  for (const std::string& v : vars) {
    Expr eq{testlang::BinaryExpr{testlang::BinaryOp::kEq, testlang::MakeVar(v),
                                 runtime::Literalize(values.at(v))}};
    out = out ? Expr{testlang::BinaryExpr{testlang::BinaryOp::kAnd,
                                          std::move(*out), std::move(eq)}}
              : std::move(eq);
  }
  return *out;
}

Expr FollowupValue(const mtc::MtcModel& m, const Bindings& followup) {
  if (m.followup_vars.size() == 1) {
    return runtime::Literalize(followup.at(m.followup_vars[0]));
  }
  std::vector<Expr> items;
  for (const std::string& v : m.followup_vars) {
    items.push_back(runtime::Literalize(followup.at(v)));
  }
  return ListOf(std::move(items));
}

// Works for the hard-coded pair only.
FuncDef OverfitFunction(const mtc::MtcModel& m,
                        const mtc::TransformationSkeleton& sk,
                        const mtc::InputPair& first) {
  FuncDef fn = SkeletonFunction(sk);
  Stmt guard;
  testlang::IfStmt branch;
  branch.cond = Conj(m.source_vars, first.source);
  branch.then_block.stmts.push_back(ReturnOf(FollowupValue(m, first.followup)));
  guard.node = std::move(branch);
  fn.body.stmts.push_back(std::move(guard));
  fn.body.stmts.push_back(ReturnOf(FollowupValue(m, first.followup)));
  return fn;
}

std::string Fence(const std::string& code) {
  return absl::StrCat("```mtl\n", code, code.ends_with('\n') ? "" : "\n",
                      "```\n");
}

enum TransformCategory { kCorrect, kOverfit, kDeadErroneous, kUncompilable };
enum PairCategory { kPairValid, kPairInvalid, kPairStray };

class SynthBackend : public Backend {
 public:
  std::string id() const override { return "synth"; }

  absl::StatusOr<std::string> Respond(const Request& request,
                                      int repetition) const override {
    const GenContext& ctx = *request.ctx;
    const GenConfig& cfg = *request.cfg;
    if (ctx.model == nullptr || ctx.registry == nullptr) {
      return absl::InvalidArgumentError(
          "synth backend needs the structured test model");
    }
    const uint64_t request_seed = Mix(cfg.seed ^ HashString(request.digest));
    Rng rng(Mix(request_seed + static_cast<uint64_t>(repetition) + 1));
    switch (ctx.task) {
      case Task::kSourceInputs:
        return SourceInputs(ctx, cfg, rng);
      case Task::kInputPairs:
        return InputPairs(ctx, cfg, request_seed, repetition, rng);
      case Task::kTransformation:
        return Transformation(ctx, cfg, request_seed, repetition);
    }
    return absl::InternalError("unknown task");
  }

 private:
  // Source bindings perturbed from the hard-coded ones. A variable keeps
  // its original value with probability 1 - rate, so duplicates occur
  // naturally; higher temperature means fewer of them.
  static std::string SourceInputs(const GenContext& ctx, const GenConfig& cfg,
                                  Rng& rng) {
    const mtc::MtcModel& m = *ctx.model;
    const double rate = std::clamp(0.5 + 0.25 * cfg.temperature, 0.0, 1.0);
    const Bindings& base = ctx.pairs.empty() ? Bindings{} : ctx.pairs[0].source;
    std::string out = absl::StrCat("Here are ", cfg.k, " source inputs.\n\n");
    for (int i = 0; i < cfg.k; ++i) {
      Block block;
      for (size_t v = 0; v < m.source_vars.size(); ++v) {
        const std::string& name = m.source_vars[v];
        auto it = base.find(name);
        Value value = it == base.end() ? Value(int64_t{0}) : it->second;
        if (rng.Chance(rate)) value = Perturb(value, rng);
        Stmt let = testlang::MakeLet(name, runtime::Literalize(value),
                                     {mtc::kSourceAnnotation});
        std::get<testlang::LetStmt>(let.node).type = m.source_types[v];
        block.stmts.push_back(std::move(let));
      }
      absl::StrAppend(&out, Fence(testlang::PrintStatements(block)), "\n");
    }
    return out;
  }

  std::vector<std::optional<Expr>> FollowupExprs(const GenContext& ctx,
                                                 const std::string& key) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    std::vector<std::optional<Expr>> exprs;
    for (const std::string& v : ctx.model->followup_vars) {
      exprs.push_back(Synthesize(*ctx.model, *ctx.registry, ctx.pairs, v));
    }
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(key, exprs);
    return exprs;
  }

  std::string InputPairs(const GenContext& ctx, const GenConfig& cfg,
                         uint64_t request_seed, int repetition,
                         Rng& rng) const {
    const mtc::MtcModel& m = *ctx.model;
    const int per = static_cast<int>(ctx.sources.size());
    Rng allot_rng(request_seed);
    const double valid = std::max(
        0.0, 1.0 - cfg.profile.invalid_pair - cfg.profile.stray_assert);
    const std::vector<int> slots =
        Allot({valid, cfg.profile.invalid_pair, cfg.profile.stray_assert},
              per * cfg.repetitions, allot_rng);
    const std::vector<std::optional<Expr>> exprs =
        FollowupExprs(ctx, absl::StrCat("pairs:", request_seed));

    const testlang::Program helpers = mtc::HelperProgram(m);
    runtime::Limits limits;
    limits.max_steps = 20000;
    std::string out = "Input pairs for the source inputs above:\n\n";
    for (int i = 0; i < per; ++i) {
      const Bindings& src = ctx.sources[i];
      const int category = slots[repetition * per + i];
      Bindings followup;
      for (size_t v = 0; v < m.followup_vars.size(); ++v) {
        const std::string& name = m.followup_vars[v];
        std::optional<Value> value;
        if (exprs[v]) {
          FuncDef fn;
          fn.name = "__pair";
          for (const std::string& s : m.source_vars) {
            fn.params.push_back(testlang::Param{s, std::nullopt});
          }
          fn.body.stmts.push_back(ReturnOf(*exprs[v]));
          std::vector<Value> args;
          for (const std::string& s : m.source_vars) args.push_back(src.at(s));
          runtime::CallOutcome r =
              runtime::CallFunction(fn, args, *ctx.registry, limits, &helpers);
          if (r.status == runtime::ExecStatus::kOk) value = std::move(r.value);
        }
        if (!value) {
          const Bindings& base = ctx.pairs.empty() ? Bindings{}
                                                   : ctx.pairs[0].followup;
          auto it = base.find(name);
          value = it == base.end() ? Value(int64_t{0}) : Perturb(it->second, rng);
        }
        if (category == kPairInvalid) {
          Value changed = Perturb(*value, rng);
          if (runtime::ValueEq(changed, *value)) changed = Value(runtime::Unit{});
          value = std::move(changed);
        }
        followup[name] = std::move(*value);
      }
      Block block;
      for (size_t v = 0; v < m.source_vars.size(); ++v) {
        Stmt let = testlang::MakeLet(m.source_vars[v],
                                     runtime::Literalize(src.at(m.source_vars[v])),
                                     {mtc::kSourceAnnotation});
        std::get<testlang::LetStmt>(let.node).type = m.source_types[v];
        block.stmts.push_back(std::move(let));
      }
      for (size_t v = 0; v < m.followup_vars.size(); ++v) {
        Stmt let = testlang::MakeLet(
            m.followup_vars[v],
            runtime::Literalize(followup.at(m.followup_vars[v])),
            {mtc::kFollowupAnnotation});
        std::get<testlang::LetStmt>(let.node).type = m.followup_types[v];
        block.stmts.push_back(std::move(let));
      }
      if (category == kPairStray) {
        // A sanity check that cannot type-check at run time for any value.
        const Expr var = testlang::MakeVar(m.followup_vars[0]);
        Stmt stray;
        stray.node = testlang::AssertStmt{Expr{testlang::BinaryExpr{
            testlang::BinaryOp::kNe,
            Expr{testlang::BinaryExpr{testlang::BinaryOp::kAdd,
                                      testlang::MakeCall("len", {var}), var}},
            var}}};
        block.stmts.push_back(std::move(stray));
      }
      testlang::RenumberStatements(block);
      absl::StrAppend(&out, Fence(testlang::PrintStatements(block)), "\n");
    }
    return out;
  }

  std::string Transformation(const GenContext& ctx, const GenConfig& cfg,
                             uint64_t request_seed, int repetition) const {
    const mtc::MtcModel& m = *ctx.model;
    const mtc::TransformationSkeleton sk =
        ctx.skeleton ? *ctx.skeleton : mtc::DeriveSkeleton(m);
    Rng allot_rng(request_seed);
    const std::vector<int> slots = Allot(
        {cfg.profile.correct, cfg.profile.overfit, cfg.profile.dead_erroneous,
         cfg.profile.uncompilable},
        cfg.repetitions, allot_rng);
    const int category = slots[repetition];
    const std::vector<std::optional<Expr>> exprs =
        FollowupExprs(ctx, absl::StrCat("transform:", request_seed));
    bool solved = !ctx.pairs.empty();
    for (const auto& e : exprs) solved = solved && e.has_value();

    FuncDef fn;
    if (ctx.pairs.empty()) {
      fn = SkeletonFunction(sk);
      fn.body.stmts.push_back(ReturnOf(testlang::MakeVar(m.source_vars[0])));
    } else if (!solved || category == kOverfit) {
      fn = OverfitFunction(m, sk, ctx.pairs[0]);
    } else {
      fn = SkeletonFunction(sk);
      Expr value = exprs.size() == 1 ? *exprs[0] : [&] {
        std::vector<Expr> items;
        for (const auto& e : exprs) items.push_back(*e);
        return ListOf(std::move(items));
      }();
      fn.body.stmts.push_back(
          testlang::MakeLet("result", std::move(value)));
      fn.body.stmts.push_back(ReturnOf(testlang::MakeVar("result")));
    }
    if (category == kDeadErroneous) {
      Stmt probe = testlang::MakeLet(
          "probe", testlang::MakeCall(absl::StrCat(m.source_vars[0], "_after"),
                                      {testlang::MakeVar(m.source_vars[0])}));
      fn.body.stmts.insert(fn.body.stmts.begin(), std::move(probe));
    } else if (category == kUncompilable) {
      Stmt& last = fn.body.stmts.back();
      auto& ret = std::get<testlang::ReturnStmt>(last.node);
      ret.value = testlang::MakeCall("normalize", {std::move(*ret.value)});
    }
    testlang::RenumberStatements(fn.body);
    return absl::StrCat("Here is the transformation:\n\n",
                        Fence(testlang::PrintFunction(fn)));
  }

  mutable std::mutex mu_;
  mutable std::map<std::string, std::vector<std::optional<Expr>>> cache_;
};

}  // namespace

std::unique_ptr<Backend> MakeSynthBackend() {
  return std::make_unique<SynthBackend>();
}

}  // namespace mrlift::generator
