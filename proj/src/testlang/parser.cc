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

#include "mrlift/testlang/parser.h"

#include <charconv>
#include <cstdlib>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace mrlift::testlang {
namespace {

// Recursive-descent parser. Each Parse* method either consumes a complete
// construct or returns the first error; the token cursor is meaningless after
// an error.
class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  absl::StatusOr<Program> ParseProgramBody(FuncOrigin default_origin) {
    Program program;
    while (!AtEnd()) {
      std::vector<std::string> annotations = ParseAnnotations();
      if (IsKeyword("fn")) {
        absl::StatusOr<FuncDef> fn = ParseFunction(std::move(annotations));
        if (!fn.ok()) return fn.status();
        fn->origin = default_origin;
        for (const std::string& a : fn->annotations) {
          if (a == "sut") fn->origin = FuncOrigin::kSut;
          if (a == "transformation") fn->origin = FuncOrigin::kTransformation;
        }
        program.functions.push_back(*std::move(fn));
      } else if (IsKeyword("test")) {
        absl::StatusOr<TestDef> t = ParseTest(std::move(annotations));
        if (!t.ok()) return t.status();
        program.tests.push_back(*std::move(t));
      } else {
        return ErrorHere("expected 'fn' or 'test'");
      }
    }
    return program;
  }

  absl::StatusOr<Block> ParseStatementList() {
    Block block;
    while (!AtEnd()) {
      absl::StatusOr<Stmt> stmt = ParseStatement();
      if (!stmt.ok()) return stmt.status();
      stmt->id = static_cast<int>(block.stmts.size());
      block.stmts.push_back(*std::move(stmt));
    }
    return block;
  }

  absl::StatusOr<Expr> ParseWholeExpression() {
    absl::StatusOr<Expr> e = ParseExpr();
    if (!e.ok()) return e;
    if (!AtEnd()) return ErrorHere("unexpected trailing tokens");
    return e;
  }

 private:
  bool AtEnd() const { return pos_ >= tokens_.size(); }
  const Token& Peek(size_t ahead = 0) const {
    static const Token kEof{TokenKind::kPunct, "", {}};
    return pos_ + ahead < tokens_.size() ? tokens_[pos_ + ahead] : kEof;
  }
  bool IsPunct(std::string_view p, size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return pos_ + ahead < tokens_.size() && t.kind == TokenKind::kPunct &&
           t.text == p;
  }
  bool IsKeyword(std::string_view k) const {
    return !AtEnd() && Peek().kind == TokenKind::kKeyword && Peek().text == k;
  }
  Span SpanHere() const {
    if (!AtEnd()) return Peek().span;
    if (tokens_.empty()) return Span{};
    return tokens_.back().span;
  }

  absl::Status ErrorHere(std::string_view message) const {
    const Span span = SpanHere();
    const std::string found =
        AtEnd() ? std::string("end of input")
                : absl::StrCat("'", Peek().text, "'");
    return absl::InvalidArgumentError(absl::StrFormat(
        "line %d, col %d: %s, found %s", span.line, span.col, std::string(message),
        found));
  }

  absl::Status ExpectPunct(std::string_view p) {
    if (!IsPunct(p)) return ErrorHere(absl::StrCat("expected '", std::string(p), "'"));
    ++pos_;
    return absl::OkStatus();
  }
  absl::Status ExpectKeyword(std::string_view k) {
    if (!IsKeyword(k)) return ErrorHere(absl::StrCat("expected '", std::string(k), "'"));
    ++pos_;
    return absl::OkStatus();
  }
  absl::StatusOr<std::string> ExpectIdent(std::string_view what) {
    if (AtEnd() || Peek().kind != TokenKind::kIdent) {
      return ErrorHere(absl::StrCat("expected ", std::string(what)));
    }
    return tokens_[pos_++].text;
  }

  std::vector<std::string> ParseAnnotations() {
    std::vector<std::string> out;
    while (!AtEnd() && Peek().kind == TokenKind::kAnnotation) {
      const std::string& text = Peek().text;
      out.push_back(text.substr(2, text.size() - 3));
      ++pos_;
    }
    return out;
  }

  absl::StatusOr<TypeAnn> ParseType() {
    absl::StatusOr<std::string> name = ExpectIdent("type name");
    if (!name.ok()) return name.status();
    TypeAnn type{*std::move(name), {}};
    if (IsPunct("<")) {
      ++pos_;
      while (true) {
        absl::StatusOr<TypeAnn> arg = ParseType();
        if (!arg.ok()) return arg.status();
        type.args.push_back(*std::move(arg));
        if (IsPunct(",")) {
          ++pos_;
          continue;
        }
        break;
      }
      if (absl::Status s = ExpectPunct(">"); !s.ok()) return s;
    }
    return type;
  }

  absl::StatusOr<FuncDef> ParseFunction(std::vector<std::string> annotations) {
    FuncDef fn;
    fn.span = SpanHere();
    fn.annotations = std::move(annotations);
    if (absl::Status s = ExpectKeyword("fn"); !s.ok()) return s;
    absl::StatusOr<std::string> name = ExpectIdent("function name");
    if (!name.ok()) return name.status();
    fn.name = *std::move(name);
    if (absl::Status s = ExpectPunct("("); !s.ok()) return s;
    if (!IsPunct(")")) {
      while (true) {
        absl::StatusOr<std::string> pname = ExpectIdent("parameter name");
        if (!pname.ok()) return pname.status();
        Param param{*std::move(pname), std::nullopt};
        if (IsPunct(":")) {
          ++pos_;
          absl::StatusOr<TypeAnn> t = ParseType();
          if (!t.ok()) return t.status();
          param.type = *std::move(t);
        }
        fn.params.push_back(std::move(param));
        if (IsPunct(",")) {
          ++pos_;
          continue;
        }
        break;
      }
    }
    if (absl::Status s = ExpectPunct(")"); !s.ok()) return s;
    if (IsPunct("->")) {
      ++pos_;
      absl::StatusOr<TypeAnn> t = ParseType();
      if (!t.ok()) return t.status();
      fn.return_type = *std::move(t);
    }
    absl::StatusOr<Block> body = ParseBlock();
    if (!body.ok()) return body.status();
    fn.body = *std::move(body);
    return fn;
  }

  absl::StatusOr<TestDef> ParseTest(std::vector<std::string> annotations) {
    TestDef test;
    test.span = SpanHere();
    test.annotations = std::move(annotations);
    if (absl::Status s = ExpectKeyword("test"); !s.ok()) return s;
    absl::StatusOr<std::string> name = ExpectIdent("test name");
    if (!name.ok()) return name.status();
    test.name = *std::move(name);
    absl::StatusOr<Block> body = ParseBlock();
    if (!body.ok()) return body.status();
    test.body = *std::move(body);
    return test;
  }

  absl::StatusOr<Block> ParseBlock() {
    if (absl::Status s = ExpectPunct("{"); !s.ok()) return s;
    Block block;
    while (!IsPunct("}")) {
      if (AtEnd()) return ErrorHere("expected '}'");
      absl::StatusOr<Stmt> stmt = ParseStatement();
      if (!stmt.ok()) return stmt.status();
      stmt->id = static_cast<int>(block.stmts.size());
      block.stmts.push_back(*std::move(stmt));
    }
    ++pos_;
    return block;
  }

  absl::StatusOr<Stmt> ParseStatement() {
    Stmt stmt;
    stmt.annotations = ParseAnnotations();
    stmt.span = SpanHere();
    if (IsKeyword("let")) {
      ++pos_;
      LetStmt let;
      absl::StatusOr<std::string> name = ExpectIdent("variable name");
      if (!name.ok()) return name.status();
      let.name = *std::move(name);
      if (IsPunct(":")) {
        ++pos_;
        absl::StatusOr<TypeAnn> t = ParseType();
        if (!t.ok()) return t.status();
        let.type = *std::move(t);
      }
      if (absl::Status s = ExpectPunct("="); !s.ok()) return s;
      absl::StatusOr<Expr> value = ParseExpr();
      if (!value.ok()) return value.status();
      let.value = *std::move(value);
      if (absl::Status s = ExpectPunct(";"); !s.ok()) return s;
      stmt.node = std::move(let);
      return stmt;
    }
    if (IsKeyword("if")) {
      absl::StatusOr<IfStmt> s = ParseIf();
      if (!s.ok()) return s.status();
      stmt.node = *std::move(s);
      return stmt;
    }
    if (IsKeyword("for")) {
      ++pos_;
      ForStmt f;
      absl::StatusOr<std::string> var = ExpectIdent("loop variable");
      if (!var.ok()) return var.status();
      f.var = *std::move(var);
      if (absl::Status s = ExpectKeyword("in"); !s.ok()) return s;
      absl::StatusOr<Expr> it = ParseExpr();
      if (!it.ok()) return it.status();
      f.iterable = *std::move(it);
      absl::StatusOr<Block> body = ParseBlock();
      if (!body.ok()) return body.status();
      f.body = *std::move(body);
      stmt.node = std::move(f);
      return stmt;
    }
    if (IsKeyword("return")) {
      ++pos_;
      ReturnStmt r;
      if (!IsPunct(";")) {
        absl::StatusOr<Expr> value = ParseExpr();
        if (!value.ok()) return value.status();
        r.value = *std::move(value);
      }
      if (absl::Status s = ExpectPunct(";"); !s.ok()) return s;
      stmt.node = std::move(r);
      return stmt;
    }
    if (IsKeyword("assert")) {
      ++pos_;
      absl::StatusOr<Expr> cond = ParseExpr();
      if (!cond.ok()) return cond.status();
      if (absl::Status s = ExpectPunct(";"); !s.ok()) return s;
      stmt.node = AssertStmt{*std::move(cond)};
      return stmt;
    }
    if (!AtEnd() && Peek().kind == TokenKind::kIdent && IsPunct("=", 1)) {
      AssignStmt a;
      a.name = tokens_[pos_].text;
      pos_ += 2;
      absl::StatusOr<Expr> value = ParseExpr();
      if (!value.ok()) return value.status();
      a.value = *std::move(value);
      if (absl::Status s = ExpectPunct(";"); !s.ok()) return s;
      stmt.node = std::move(a);
      return stmt;
    }
    if (AtEnd() || Peek().kind == TokenKind::kKeyword) {
      if (!IsKeyword("unit")) return ErrorHere("expected statement");
    }
    absl::StatusOr<Expr> e = ParseExpr();
    if (!e.ok()) return e.status();
    if (absl::Status s = ExpectPunct(";"); !s.ok()) return s;
    stmt.node = ExprStmt{*std::move(e)};
    return stmt;
  }

  absl::StatusOr<IfStmt> ParseIf() {
    if (absl::Status s = ExpectKeyword("if"); !s.ok()) return s;
    IfStmt out;
    absl::StatusOr<Expr> cond = ParseExpr();
    if (!cond.ok()) return cond.status();
    out.cond = *std::move(cond);
    absl::StatusOr<Block> then_block = ParseBlock();
    if (!then_block.ok()) return then_block.status();
    out.then_block = *std::move(then_block);
    if (IsKeyword("else")) {
      ++pos_;
      if (IsKeyword("if")) {
        Stmt nested;
        nested.span = SpanHere();
        absl::StatusOr<IfStmt> inner = ParseIf();
        if (!inner.ok()) return inner.status();
        nested.node = *std::move(inner);
        Block else_block;
        else_block.stmts.push_back(std::move(nested));
        out.else_block = std::move(else_block);
      } else {
        absl::StatusOr<Block> else_block = ParseBlock();
        if (!else_block.ok()) return else_block.status();
        out.else_block = *std::move(else_block);
      }
    }
    return out;
  }

  absl::StatusOr<Expr> ParseExpr() { return ParseBinary(1); }

  std::optional<BinaryOp> PeekBinaryOp() const {
    if (AtEnd() || Peek().kind != TokenKind::kPunct) return std::nullopt;
    static const std::pair<std::string_view, BinaryOp> kOps[] = {
        {"||", BinaryOp::kOr},  {"&&", BinaryOp::kAnd}, {"==", BinaryOp::kEq},
        {"!=", BinaryOp::kNe},  {"<", BinaryOp::kLt},   {"<=", BinaryOp::kLe},
        {">", BinaryOp::kGt},   {">=", BinaryOp::kGe},  {"+", BinaryOp::kAdd},
        {"-", BinaryOp::kSub},  {"*", BinaryOp::kMul},  {"/", BinaryOp::kDiv},
        {"%", BinaryOp::kMod},
    };
    for (const auto& [text, op] : kOps) {
      if (Peek().text == text) return op;
    }
    return std::nullopt;
  }

  // Precedence climbing over the left-associative binary operators.
  absl::StatusOr<Expr> ParseBinary(int min_prec) {
    absl::StatusOr<Expr> lhs = ParseUnary();
    if (!lhs.ok()) return lhs;
    while (true) {
      std::optional<BinaryOp> op = PeekBinaryOp();
      if (!op || Precedence(*op) < min_prec) break;
      const Span span = SpanHere();
      ++pos_;
      absl::StatusOr<Expr> rhs = ParseBinary(Precedence(*op) + 1);
      if (!rhs.ok()) return rhs;
      Expr combined{BinaryExpr{*op, *std::move(lhs), *std::move(rhs)}, span};
      lhs = std::move(combined);
    }
    return lhs;
  }

  absl::StatusOr<Expr> ParseUnary() {
    if (IsPunct("-") || IsPunct("!")) {
      const Span span = SpanHere();
      const UnaryOp op = IsPunct("-") ? UnaryOp::kNeg : UnaryOp::kNot;
      ++pos_;
      absl::StatusOr<Expr> operand = ParseUnary();
      if (!operand.ok()) return operand;
      return Expr{UnaryExpr{op, *std::move(operand)}, span};
    }
    return ParsePostfix();
  }

  absl::StatusOr<Expr> ParsePostfix() {
    absl::StatusOr<Expr> e = ParsePrimary();
    if (!e.ok()) return e;
    while (IsPunct("[")) {
      const Span span = SpanHere();
      ++pos_;
      absl::StatusOr<Expr> index = ParseExpr();
      if (!index.ok()) return index;
      if (absl::Status s = ExpectPunct("]"); !s.ok()) return s;
      Expr combined{IndexExpr{*std::move(e), *std::move(index)}, span};
      e = std::move(combined);
    }
    return e;
  }

  absl::StatusOr<std::vector<Expr>> ParseExprList(std::string_view close) {
    std::vector<Expr> items;
    if (IsPunct(close)) {
      ++pos_;
      return items;
    }
    while (true) {
      absl::StatusOr<Expr> item = ParseExpr();
      if (!item.ok()) return item.status();
      items.push_back(*std::move(item));
      if (IsPunct(",")) {
        ++pos_;
        continue;
      }
      break;
    }
    if (absl::Status s = ExpectPunct(close); !s.ok()) return s;
    return items;
  }

  absl::StatusOr<Expr> ParsePrimary() {
    if (AtEnd()) return ErrorHere("expected expression");
    const Token& tok = Peek();
    const Span span = tok.span;
    switch (tok.kind) {
      case TokenKind::kIntLit: {
        int64_t value = 0;
        const char* begin = tok.text.data();
        const char* end = begin + tok.text.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr != end) {
          return ErrorHere("integer literal out of range");
        }
        ++pos_;
        return Expr{IntLit{value}, span};
      }
      case TokenKind::kFloatLit: {
        const double value = std::strtod(tok.text.c_str(), nullptr);
        ++pos_;
        return Expr{FloatLit{value}, span};
      }
      case TokenKind::kStrLit: {
        absl::StatusOr<std::string> value = UnescapeStringLiteral(tok.text);
        if (!value.ok()) return ErrorHere(std::string(value.status().message()));
        ++pos_;
        return Expr{StrLit{*std::move(value)}, span};
      }
      case TokenKind::kBoolLit: {
        const bool value = tok.text == "true";
        ++pos_;
        return Expr{BoolLit{value}, span};
      }
      case TokenKind::kKeyword:
        if (tok.text == "unit") {
          ++pos_;
          return Expr{UnitLit{}, span};
        }
        return ErrorHere("expected expression");
      case TokenKind::kIdent: {
        std::string path = tok.text;
        ++pos_;
        bool dotted = false;
        while (IsPunct(".")) {
          ++pos_;
          absl::StatusOr<std::string> part = ExpectIdent("name after '.'");
          if (!part.ok()) return part.status();
          absl::StrAppend(&path, ".", *part);
          dotted = true;
        }
        if (IsPunct("(")) {
          ++pos_;
          absl::StatusOr<std::vector<Expr>> args = ParseExprList(")");
          if (!args.ok()) return args.status();
          return Expr{CallExpr{std::move(path), *std::move(args)}, span};
        }
        if (dotted) return ErrorHere("expected '(' after dotted name");
        return Expr{VarRef{std::move(path)}, span};
      }
      case TokenKind::kPunct:
        if (tok.text == "(") {
          ++pos_;
          absl::StatusOr<Expr> inner = ParseExpr();
          if (!inner.ok()) return inner;
          if (absl::Status s = ExpectPunct(")"); !s.ok()) return s;
          return inner;
        }
        if (tok.text == "[") {
          ++pos_;
          absl::StatusOr<std::vector<Expr>> items = ParseExprList("]");
          if (!items.ok()) return items.status();
          return Expr{ListExpr{*std::move(items)}, span};
        }
        return ErrorHere("expected expression");
      case TokenKind::kAnnotation:
        return ErrorHere("unexpected annotation");
    }
    return ErrorHere("expected expression");
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

}  // namespace

absl::StatusOr<Program> ParseProgram(std::string_view source,
                                     FuncOrigin default_origin) {
  absl::StatusOr<std::vector<Token>> tokens = Tokenize(source);
  if (!tokens.ok()) return tokens.status();
  Parser parser(*std::move(tokens));
  return parser.ParseProgramBody(default_origin);
}

absl::StatusOr<Block> ParseStatements(std::string_view source) {
  absl::StatusOr<std::vector<Token>> tokens = Tokenize(source);
  if (!tokens.ok()) return tokens.status();
  Parser parser(*std::move(tokens));
  return parser.ParseStatementList();
}

absl::StatusOr<Expr> ParseExpression(std::string_view source) {
  absl::StatusOr<std::vector<Token>> tokens = Tokenize(source);
  if (!tokens.ok()) return tokens.status();
  Parser parser(*std::move(tokens));
  return parser.ParseWholeExpression();
}

}  // namespace mrlift::testlang
