// Copyright 2026 The Mist Authors
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

#include "mist/python/parser.h"

#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "mist/errors.h"
#include "mist/python/lexer.h"
#include "mist/python/literals.h"

namespace mist::py {
namespace {

constexpr const char* kInvalidSyntax = "invalid syntax";

enum class TargetContext { kAssign, kAugAssign, kDelete, kFor, kWith };

std::string_view DescribeForTarget(const Node& node) {
  switch (node.kind) {
    case NodeKind::kCall: return "function call";
    case NodeKind::kConstant:
      switch (node.constant.kind) {
        case Constant::Kind::kTrue: return "True";
        case Constant::Kind::kFalse: return "False";
        case Constant::Kind::kNone: return "None";
        case Constant::Kind::kEllipsis: return "Ellipsis";
        default: return "literal";
      }
    case NodeKind::kBinOp:
    case NodeKind::kUnaryOp: return "expression";
    case NodeKind::kBoolOp: return "expression";
    case NodeKind::kCompare: return "comparison";
    case NodeKind::kLambda: return "lambda";
    case NodeKind::kIfExp: return "conditional expression";
    case NodeKind::kNamedExpr: return "named expression";
    case NodeKind::kDict: return "dict literal";
    case NodeKind::kSet: return "set display";
    case NodeKind::kListComp: return "list comprehension";
    case NodeKind::kSetComp: return "set comprehension";
    case NodeKind::kDictComp: return "dict comprehension";
    case NodeKind::kGeneratorExp: return "generator expression";
    case NodeKind::kYield:
    case NodeKind::kYieldFrom: return "yield expression";
    case NodeKind::kAwait: return "await expression";
    case NodeKind::kJoinedStr: return "f-string expression";
    case NodeKind::kFormattedValue: return "f-string expression";
    default: return "expression";
  }
}

// Accumulates the pieces of an implicitly concatenated string that contains
// at least one f-string.
struct JoinedBuilder {
  std::string pending;
  NodeList values;
  Span span;

  void Flush() {
    if (pending.empty()) return;
    NodePtr c = MakeNode(NodeKind::kConstant);
    c->constant.kind = Constant::Kind::kStr;
    c->constant.text = std::move(pending);
    c->span = span;
    pending.clear();
    values.push_back(std::move(c));
  }
};

struct StringPrefix {
  bool raw = false;
  bool bytes = false;
  bool fstring = false;
  bool unicode = false;
  std::size_t length = 0;
};

StringPrefix ReadPrefix(std::string_view text) {
  StringPrefix p;
  while (p.length < text.size() && text[p.length] != '\'' &&
         text[p.length] != '"') {
    switch (text[p.length] | 0x20) {
      case 'r': p.raw = true; break;
      case 'b': p.bytes = true; break;
      case 'f': p.fstring = true; break;
      case 'u': p.unicode = true; break;
      default: break;
    }
    ++p.length;
  }
  return p;
}

bool IsPySpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

class Parser {
 public:
  Parser(std::string_view source, LexOptions options)
      : tokens_(Tokenize(source, options)) {}

  NodePtr ParseModule() {
    NodePtr module = MakeNode(NodeKind::kModule);
    while (Peek().kind != TokenKind::kEndMarker) {
      ParseStatement(module->list(field::kBody));
    }
    return module;
  }

  // Body of an f-string replacement field, parsed as if parenthesized.
  NodePtr ParseFStringExpression() {
    NodePtr e = ParseParenContents(/*start=*/p_, /*at_end=*/true);
    if (Peek().kind != TokenKind::kEndMarker) {
      Fail(Peek(), "f-string: invalid syntax");
    }
    return e;
  }

 private:
  // Token access.

  const Token& Peek(std::size_t k = 0) const {
    std::size_t i = p_ + k;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  bool IsOp(std::string_view op, std::size_t k = 0) const {
    const Token& t = Peek(k);
    return t.kind == TokenKind::kOp && t.text == op;
  }
  bool IsKw(std::string_view kw, std::size_t k = 0) const {
    const Token& t = Peek(k);
    return t.kind == TokenKind::kName && t.text == kw;
  }
  bool IsIdentifier(std::size_t k = 0) const {
    const Token& t = Peek(k);
    return t.kind == TokenKind::kName && !IsKeyword(t.text);
  }
  bool AcceptOp(std::string_view op) {
    if (!IsOp(op)) return false;
    ++p_;
    return true;
  }
  bool AcceptKw(std::string_view kw) {
    if (!IsKw(kw)) return false;
    ++p_;
    return true;
  }
  void ExpectOp(std::string_view op) {
    if (!AcceptOp(op)) {
      if (op == ":") Fail(Peek(), "expected ':'");
      Fail(Peek(), kInvalidSyntax);
    }
  }
  void ExpectKw(std::string_view kw) {
    if (!AcceptKw(kw)) Fail(Peek(), kInvalidSyntax);
  }
  void ExpectNewline() {
    if (Peek().kind != TokenKind::kNewline) Fail(Peek(), kInvalidSyntax);
    ++p_;
  }
  std::string ExpectName() {
    if (!IsIdentifier()) Fail(Peek(), kInvalidSyntax);
    return std::string(tokens_[p_++].text);
  }

  [[noreturn]] void Fail(const Token& token, std::string_view message) const {
    throw SyntaxError(std::string(message), token.line, token.col);
  }
  [[noreturn]] void Fail(const Node& node, std::string_view message) const {
    throw SyntaxError(std::string(message), node.span.line, node.span.col);
  }

  // Span from token `start` to the last non-layout token consumed.
  Span SpanFrom(std::size_t start) const {
    Span span;
    const Token& first = tokens_[std::min(start, tokens_.size() - 1)];
    span.line = first.line;
    span.col = first.col;
    std::size_t last = p_;
    while (last > start) {
      const Token& t = tokens_[last - 1];
      if (t.kind != TokenKind::kNewline && t.kind != TokenKind::kIndent &&
          t.kind != TokenKind::kDedent) {
        span.end_line = t.end_line;
        span.end_col = t.end_col;
        return span;
      }
      --last;
    }
    span.end_line = first.line;
    span.end_col = first.col;
    return span;
  }

  NodePtr Make(NodeKind kind, std::size_t start) const {
    NodePtr n = MakeNode(kind);
    n->span = SpanFrom(start);
    return n;
  }

  static void Put(Node& node, int f, NodePtr child) {
    if (child) node.fields[f].push_back(std::move(child));
  }

  bool StartsExpression(std::size_t k = 0) const {
    const Token& t = Peek(k);
    switch (t.kind) {
      case TokenKind::kNumber:
      case TokenKind::kString:
        return true;
      case TokenKind::kName:
        return !IsKeyword(t.text) || t.text == "True" || t.text == "False" ||
               t.text == "None" || t.text == "not" || t.text == "lambda" ||
               t.text == "await";
      case TokenKind::kOp:
        return t.text == "(" || t.text == "[" || t.text == "{" ||
               t.text == "-" || t.text == "+" || t.text == "~" ||
               t.text == "*" || t.text == "...";
      default:
        return false;
    }
  }

  bool AtComprehension() const {
    return IsKw("for") || (IsKw("async") && IsKw("for", 1));
  }

  // Statements.

  void ParseStatement(NodeList& out) {
    if (IsOp("@")) {
      out.push_back(ParseDecorated());
      return;
    }
    if (IsKw("def")) {
      out.push_back(ParseFunctionDef(NodeList(), p_, false));
      return;
    }
    if (IsKw("class")) {
      out.push_back(ParseClassDef(NodeList(), p_));
      return;
    }
    if (IsKw("if")) {
      out.push_back(ParseIf());
      return;
    }
    if (IsKw("while")) {
      out.push_back(ParseWhile());
      return;
    }
    if (IsKw("for")) {
      out.push_back(ParseFor(p_, false));
      return;
    }
    if (IsKw("try")) {
      out.push_back(ParseTry());
      return;
    }
    if (IsKw("with")) {
      out.push_back(ParseWith(p_, false));
      return;
    }
    if (IsKw("async")) {
      std::size_t start = p_;
      if (IsKw("def", 1)) {
        ++p_;
        out.push_back(ParseFunctionDef(NodeList(), start, true));
        return;
      }
      if (IsKw("for", 1)) {
        ++p_;
        out.push_back(ParseFor(start, true));
        return;
      }
      if (IsKw("with", 1)) {
        ++p_;
        out.push_back(ParseWith(start, true));
        return;
      }
      Fail(Peek(), kInvalidSyntax);
    }
    ParseSimpleStatements(out);
  }

  void ParseBlock(NodeList& out) {
    if (Peek().kind == TokenKind::kNewline) {
      ++p_;
      if (Peek().kind != TokenKind::kIndent) {
        Fail(Peek(), "expected an indented block");
      }
      ++p_;
      while (Peek().kind != TokenKind::kDedent &&
             Peek().kind != TokenKind::kEndMarker) {
        ParseStatement(out);
      }
      if (Peek().kind == TokenKind::kDedent) ++p_;
      return;
    }
    ParseSimpleStatements(out);
  }

  void ParseSimpleStatements(NodeList& out) {
    while (true) {
      out.push_back(ParseSimpleStatement());
      if (AcceptOp(";")) {
        if (Peek().kind == TokenKind::kNewline) break;
        continue;
      }
      break;
    }
    ExpectNewline();
  }

  NodePtr ParseSimpleStatement() {
    std::size_t start = p_;
    if (AcceptKw("pass")) return Make(NodeKind::kPass, start);
    if (AcceptKw("break")) return Make(NodeKind::kBreak, start);
    if (AcceptKw("continue")) return Make(NodeKind::kContinue, start);
    if (AcceptKw("return")) {
      NodePtr value;
      if (StartsExpression()) value = ParseStarExpressions();
      NodePtr n = Make(NodeKind::kReturn, start);
      Put(*n, field::kValue, std::move(value));
      return n;
    }
    if (AcceptKw("raise")) {
      NodePtr exc;
      NodePtr cause;
      if (StartsExpression()) {
        exc = ParseExpression();
        if (AcceptKw("from")) cause = ParseExpression();
      }
      NodePtr n = Make(NodeKind::kRaise, start);
      Put(*n, field::kExc, std::move(exc));
      Put(*n, field::kCause, std::move(cause));
      return n;
    }
    if (IsKw("global") || IsKw("nonlocal")) {
      bool global = IsKw("global");
      ++p_;
      std::vector<std::string> names;
      names.push_back(ExpectName());
      while (AcceptOp(",")) names.push_back(ExpectName());
      NodePtr n =
          Make(global ? NodeKind::kGlobal : NodeKind::kNonlocal, start);
      n->names = std::move(names);
      return n;
    }
    if (AcceptKw("del")) {
      NodeList targets;
      do {
        if (!StartsExpression()) break;
        NodePtr t = ParseBitwiseOr();
        ValidateTarget(*t, TargetContext::kDelete);
        targets.push_back(std::move(t));
      } while (AcceptOp(","));
      if (targets.empty()) Fail(Peek(), kInvalidSyntax);
      NodePtr n = Make(NodeKind::kDelete, start);
      n->list(field::kTargets) = std::move(targets);
      return n;
    }
    if (AcceptKw("assert")) {
      NodePtr test = ParseExpression();
      NodePtr msg;
      if (AcceptOp(",")) msg = ParseExpression();
      NodePtr n = Make(NodeKind::kAssert, start);
      Put(*n, field::kAssertTest, std::move(test));
      Put(*n, field::kAssertMsg, std::move(msg));
      return n;
    }
    if (IsKw("import")) return ParseImport();
    if (IsKw("from")) return ParseImportFrom();
    return ParseExpressionStatement();
  }

  NodePtr ParseAssignValue() {
    if (IsKw("yield")) return ParseYieldExpr();
    return ParseStarExpressions();
  }

  NodePtr ParseExpressionStatement() {
    std::size_t start = p_;
    NodePtr first = ParseAssignValue();

    if (IsOp(":")) {
      ++p_;
      if (first->kind == NodeKind::kTuple && !first->parenthesized) {
        Fail(*first, "only single target (not tuple) can be annotated");
      }
      if (first->kind != NodeKind::kName &&
          first->kind != NodeKind::kAttribute &&
          first->kind != NodeKind::kSubscript) {
        Fail(*first, "illegal target for annotation");
      }
      NodePtr annotation = ParseExpression();
      NodePtr value;
      if (AcceptOp("=")) value = ParseAssignValue();
      NodePtr n = Make(NodeKind::kAnnAssign, start);
      n->flag =
          first->kind == NodeKind::kName && !first->parenthesized ? 1 : 0;
      Put(*n, field::kTarget, std::move(first));
      Put(*n, field::kAnnotation, std::move(annotation));
      Put(*n, field::kAnnValue, std::move(value));
      return n;
    }

    static constexpr std::pair<std::string_view, Op> kAugOps[] = {
        {"+=", Op::kAdd},     {"-=", Op::kSub},     {"*=", Op::kMult},
        {"@=", Op::kMatMult}, {"/=", Op::kDiv},     {"%=", Op::kMod},
        {"&=", Op::kBitAnd},  {"|=", Op::kBitOr},   {"^=", Op::kBitXor},
        {"<<=", Op::kLShift}, {">>=", Op::kRShift}, {"**=", Op::kPow},
        {"//=", Op::kFloorDiv}};
    for (const auto& [text, op] : kAugOps) {
      if (!IsOp(text)) continue;
      ++p_;
      if (first->kind != NodeKind::kName &&
          first->kind != NodeKind::kAttribute &&
          first->kind != NodeKind::kSubscript) {
        Fail(*first, fmt::format("'{}' is an illegal expression for "
                                 "augmented assignment",
                                 DescribeForTarget(*first)));
      }
      NodePtr value = ParseAssignValue();
      NodePtr n = Make(NodeKind::kAugAssign, start);
      n->op = op;
      Put(*n, field::kTarget, std::move(first));
      Put(*n, field::kAugValue, std::move(value));
      return n;
    }

    if (IsOp("=")) {
      NodeList targets;
      NodePtr current = std::move(first);
      while (AcceptOp("=")) {
        ValidateTarget(*current, TargetContext::kAssign);
        targets.push_back(std::move(current));
        current = ParseAssignValue();
      }
      NodePtr n = Make(NodeKind::kAssign, start);
      n->list(field::kTargets) = std::move(targets);
      Put(*n, field::kAssignValue, std::move(current));
      return n;
    }

    if (first->kind == NodeKind::kStarred) {
      Fail(*first, "can't use starred expression here");
    }
    NodePtr n = Make(NodeKind::kExpr, start);
    Put(*n, field::kValue, std::move(first));
    return n;
  }

  void ValidateTarget(const Node& node, TargetContext context) const {
    switch (node.kind) {
      case NodeKind::kName:
      case NodeKind::kAttribute:
      case NodeKind::kSubscript:
        return;
      case NodeKind::kStarred:
        if (context == TargetContext::kDelete) {
          Fail(node, "cannot delete starred");
        }
        ValidateTarget(*node.child(field::kValue), context);
        return;
      case NodeKind::kTuple:
      case NodeKind::kList:
        for (const NodePtr& elt : node.list(field::kElts)) {
          ValidateTarget(*elt, context);
        }
        return;
      default:
        break;
    }
    std::string_view verb =
        context == TargetContext::kDelete ? "delete" : "assign to";
    Fail(node, fmt::format("cannot {} {}", verb, DescribeForTarget(node)));
  }

  std::string ParseDottedName() {
    std::string name = ExpectName();
    while (AcceptOp(".")) {
      name += '.';
      name += ExpectName();
    }
    return name;
  }

  NodePtr ParseImport() {
    std::size_t start = p_;
    ExpectKw("import");
    NodePtr n = MakeNode(NodeKind::kImport);
    do {
      std::size_t alias_start = p_;
      std::string name = ParseDottedName();
      std::string asname;
      if (AcceptKw("as")) asname = ExpectName();
      NodePtr alias = Make(NodeKind::kAlias, alias_start);
      alias->name = std::move(name);
      alias->asname = std::move(asname);
      n->list(field::kAliases).push_back(std::move(alias));
    } while (AcceptOp(","));
    n->span = SpanFrom(start);
    return n;
  }

  NodePtr ParseImportFrom() {
    std::size_t start = p_;
    ExpectKw("from");
    int level = 0;
    while (true) {
      if (AcceptOp(".")) {
        level += 1;
      } else if (AcceptOp("...")) {
        level += 3;
      } else {
        break;
      }
    }
    std::string module;
    if (!IsKw("import")) module = ParseDottedName();
    if (level == 0 && module.empty()) Fail(Peek(), kInvalidSyntax);
    ExpectKw("import");
    NodePtr n = MakeNode(NodeKind::kImportFrom);
    n->name = std::move(module);
    n->flag = level;
    if (IsOp("*")) {
      std::size_t alias_start = p_++;
      NodePtr alias = Make(NodeKind::kAlias, alias_start);
      alias->name = "*";
      n->list(field::kAliases).push_back(std::move(alias));
    } else {
      bool parens = AcceptOp("(");
      while (true) {
        std::size_t alias_start = p_;
        std::string name = ExpectName();
        std::string asname;
        if (AcceptKw("as")) asname = ExpectName();
        NodePtr alias = Make(NodeKind::kAlias, alias_start);
        alias->name = std::move(name);
        alias->asname = std::move(asname);
        n->list(field::kAliases).push_back(std::move(alias));
        if (!AcceptOp(",")) break;
        if (parens && IsOp(")")) break;
        if (!parens && !IsIdentifier()) {
          Fail(Peek(), "trailing comma not allowed without surrounding "
                       "parentheses");
        }
      }
      if (parens) ExpectOp(")");
    }
    n->span = SpanFrom(start);
    return n;
  }

  NodePtr ParseDecorated() {
    NodeList decorators;
    while (AcceptOp("@")) {
      decorators.push_back(ParseNamedExpression());
      ExpectNewline();
    }
    std::size_t start = p_;
    if (IsKw("def")) return ParseFunctionDef(std::move(decorators), start, false);
    if (IsKw("async") && IsKw("def", 1)) {
      ++p_;
      return ParseFunctionDef(std::move(decorators), start, true);
    }
    if (IsKw("class")) return ParseClassDef(std::move(decorators), start);
    Fail(Peek(), kInvalidSyntax);
  }

  NodePtr ParseFunctionDef(NodeList decorators, std::size_t start,
                           bool is_async) {
    ExpectKw("def");
    std::string name = ExpectName();
    ExpectOp("(");
    NodePtr args = ParseParameters(")", /*annotations=*/true);
    ExpectOp(")");
    NodePtr returns;
    if (AcceptOp("->")) returns = ParseExpression();
    ExpectOp(":");
    NodeList body;
    ParseBlock(body);
    NodePtr n = Make(
        is_async ? NodeKind::kAsyncFunctionDef : NodeKind::kFunctionDef,
        start);
    n->name = std::move(name);
    n->list(field::kDecorators) = std::move(decorators);
    Put(*n, field::kDefArgs, std::move(args));
    Put(*n, field::kDefReturns, std::move(returns));
    n->list(field::kDefBody) = std::move(body);
    return n;
  }

  NodePtr ParseArg(bool annotations) {
    std::size_t start = p_;
    std::string name = ExpectName();
    NodePtr annotation;
    if (annotations && AcceptOp(":")) annotation = ParseExpression();
    NodePtr arg = Make(NodeKind::kArg, start);
    arg->name = std::move(name);
    Put(*arg, field::kArgAnnotation, std::move(annotation));
    return arg;
  }

  NodePtr ParseParameters(std::string_view closing, bool annotations) {
    std::size_t start = p_;
    NodePtr a = MakeNode(NodeKind::kArguments);
    bool seen_slash = false;
    bool seen_star = false;
    bool seen_default = false;
    bool seen_kwarg = false;
    bool any = false;
    while (!IsOp(closing)) {
      if (seen_kwarg) Fail(Peek(), "arguments cannot follow var-keyword argument");
      if (IsOp("/")) {
        if (seen_slash || seen_star || !any) Fail(Peek(), kInvalidSyntax);
        ++p_;
        seen_slash = true;
        auto& pos = a->list(field::kPosArgs);
        auto& posonly = a->list(field::kPosonlyArgs);
        for (auto& arg : pos) posonly.push_back(std::move(arg));
        pos.clear();
      } else if (IsOp("*")) {
        if (seen_star) Fail(Peek(), "* argument may appear only once");
        ++p_;
        seen_star = true;
        if (IsIdentifier()) {
          Put(*a, field::kVararg, ParseArg(annotations));
        } else if (!IsOp(",") || IsOp(closing, 1)) {
          Fail(Peek(), "named arguments must follow bare *");
        }
      } else if (IsOp("**")) {
        ++p_;
        Put(*a, field::kKwarg, ParseArg(annotations));
        seen_kwarg = true;
      } else {
        NodePtr arg = ParseArg(annotations);
        NodePtr def;
        if (AcceptOp("=")) def = ParseExpression();
        if (seen_star) {
          a->list(field::kKwonlyArgs).push_back(std::move(arg));
          a->list(field::kKwDefaults).push_back(std::move(def));
        } else {
          if (def) {
            seen_default = true;
            a->list(field::kDefaults).push_back(std::move(def));
          } else if (seen_default) {
            Fail(*arg, "non-default argument follows default argument");
          }
          a->list(field::kPosArgs).push_back(std::move(arg));
        }
      }
      any = true;
      if (!AcceptOp(",")) break;
    }
    if (!IsOp(closing)) Fail(Peek(), kInvalidSyntax);
    a->span = SpanFrom(start);
    return a;
  }

  NodePtr ParseClassDef(NodeList decorators, std::size_t start) {
    ExpectKw("class");
    std::string name = ExpectName();
    NodeList bases;
    NodeList keywords;
    if (AcceptOp("(")) {
      ParseCallArguments(bases, keywords);
      ExpectOp(")");
    }
    ExpectOp(":");
    NodeList body;
    ParseBlock(body);
    NodePtr n = Make(NodeKind::kClassDef, start);
    n->name = std::move(name);
    n->list(field::kDecorators) = std::move(decorators);
    n->list(field::kClassBases) = std::move(bases);
    n->list(field::kClassKeywords) = std::move(keywords);
    n->list(field::kClassBody) = std::move(body);
    return n;
  }

  NodePtr ParseIf() {
    std::size_t start = p_;
    ++p_;  // 'if' or 'elif'
    NodePtr test = ParseNamedExpression();
    ExpectOp(":");
    NodeList body;
    ParseBlock(body);
    NodeList orelse;
    if (IsKw("elif")) {
      orelse.push_back(ParseIf());
    } else if (AcceptKw("else")) {
      ExpectOp(":");
      ParseBlock(orelse);
    }
    NodePtr n = Make(NodeKind::kIf, start);
    Put(*n, field::kTest, std::move(test));
    n->list(field::kCondBody) = std::move(body);
    n->list(field::kCondOrelse) = std::move(orelse);
    return n;
  }

  NodePtr ParseWhile() {
    std::size_t start = p_;
    ExpectKw("while");
    NodePtr test = ParseNamedExpression();
    ExpectOp(":");
    NodeList body;
    ParseBlock(body);
    NodeList orelse;
    if (AcceptKw("else")) {
      ExpectOp(":");
      ParseBlock(orelse);
    }
    NodePtr n = Make(NodeKind::kWhile, start);
    Put(*n, field::kTest, std::move(test));
    n->list(field::kCondBody) = std::move(body);
    n->list(field::kCondOrelse) = std::move(orelse);
    return n;
  }

  NodePtr ParseFor(std::size_t start, bool is_async) {
    ExpectKw("for");
    NodePtr target = ParseStarTargets();
    ExpectKw("in");
    NodePtr iter = ParseStarExpressions();
    ExpectOp(":");
    NodeList body;
    ParseBlock(body);
    NodeList orelse;
    if (AcceptKw("else")) {
      ExpectOp(":");
      ParseBlock(orelse);
    }
    NodePtr n = Make(is_async ? NodeKind::kAsyncFor : NodeKind::kFor, start);
    Put(*n, field::kTarget, std::move(target));
    Put(*n, field::kForIter, std::move(iter));
    n->list(field::kForBody) = std::move(body);
    n->list(field::kForOrelse) = std::move(orelse);
    return n;
  }

  NodePtr ParseTry() {
    std::size_t start = p_;
    ExpectKw("try");
    ExpectOp(":");
    NodeList body;
    ParseBlock(body);
    NodeList handlers;
    while (IsKw("except")) {
      std::size_t h_start = p_++;
      NodePtr type;
      std::string name;
      if (!IsOp(":")) {
        type = ParseExpression();
        if (IsOp(",")) {
          Fail(Peek(), "multiple exception types must be parenthesized");
        }
        if (AcceptKw("as")) name = ExpectName();
      }
      ExpectOp(":");
      NodeList h_body;
      ParseBlock(h_body);
      NodePtr h = Make(NodeKind::kExceptHandler, h_start);
      h->name = std::move(name);
      Put(*h, field::kHandlerType, std::move(type));
      h->list(field::kHandlerBody) = std::move(h_body);
      handlers.push_back(std::move(h));
    }
    NodeList orelse;
    NodeList finalbody;
    if (!handlers.empty() && AcceptKw("else")) {
      ExpectOp(":");
      ParseBlock(orelse);
    }
    if (AcceptKw("finally")) {
      ExpectOp(":");
      ParseBlock(finalbody);
    }
    if (handlers.empty() && finalbody.empty()) {
      Fail(Peek(), "expected 'except' or 'finally' block");
    }
    NodePtr n = Make(NodeKind::kTry, start);
    n->list(field::kTryBody) = std::move(body);
    n->list(field::kHandlers) = std::move(handlers);
    n->list(field::kTryOrelse) = std::move(orelse);
    n->list(field::kFinalbody) = std::move(finalbody);
    return n;
  }

  NodePtr ParseWithItem() {
    std::size_t start = p_;
    NodePtr expr = ParseExpression();
    NodePtr vars;
    if (AcceptKw("as")) {
      vars = ParseStarTarget();
      ValidateTarget(*vars, TargetContext::kWith);
    }
    NodePtr item = Make(NodeKind::kWithItem, start);
    Put(*item, field::kContextExpr, std::move(expr));
    Put(*item, field::kOptionalVars, std::move(vars));
    return item;
  }

  NodePtr ParseWith(std::size_t start, bool is_async) {
    ExpectKw("with");
    NodeList items;
    bool done = false;
    if (IsOp("(")) {
      // Parenthesized item list, falling back to a parenthesized expression.
      std::size_t save = p_;
      try {
        ++p_;
        NodeList trial;
        trial.push_back(ParseWithItem());
        while (AcceptOp(",")) {
          if (IsOp(")")) break;
          trial.push_back(ParseWithItem());
        }
        ExpectOp(")");
        if (!IsOp(":")) throw SyntaxError(kInvalidSyntax, 0, 0);
        items = std::move(trial);
        done = true;
      } catch (const SyntaxError&) {
        p_ = save;
      }
    }
    if (!done) {
      items.push_back(ParseWithItem());
      while (AcceptOp(",")) items.push_back(ParseWithItem());
    }
    ExpectOp(":");
    NodeList body;
    ParseBlock(body);
    NodePtr n = Make(is_async ? NodeKind::kAsyncWith : NodeKind::kWith, start);
    n->list(field::kWithItems) = std::move(items);
    n->list(field::kWithBody) = std::move(body);
    return n;
  }

  // Targets.

  NodePtr ParseStarTarget() {
    std::size_t start = p_;
    if (AcceptOp("*")) {
      NodePtr value = ParseBitwiseOr();
      NodePtr n = Make(NodeKind::kStarred, start);
      Put(*n, field::kValue, std::move(value));
      return n;
    }
    return ParseBitwiseOr();
  }

  NodePtr ParseStarTargets() {
    std::size_t start = p_;
    NodePtr first = ParseStarTarget();
    if (!IsOp(",")) {
      ValidateTarget(*first, TargetContext::kFor);
      return first;
    }
    NodePtr tuple = MakeNode(NodeKind::kTuple);
    tuple->list(field::kElts).push_back(std::move(first));
    while (AcceptOp(",")) {
      if (IsKw("in") || !StartsExpression()) break;
      tuple->list(field::kElts).push_back(ParseStarTarget());
    }
    tuple->span = SpanFrom(start);
    ValidateTarget(*tuple, TargetContext::kFor);
    return tuple;
  }

  // Expressions.

  NodePtr ParseYieldExpr() {
    std::size_t start = p_;
    ExpectKw("yield");
    if (AcceptKw("from")) {
      NodePtr value = ParseExpression();
      NodePtr n = Make(NodeKind::kYieldFrom, start);
      Put(*n, field::kValue, std::move(value));
      return n;
    }
    NodePtr value;
    if (StartsExpression()) value = ParseStarExpressions();
    NodePtr n = Make(NodeKind::kYield, start);
    Put(*n, field::kValue, std::move(value));
    return n;
  }

  NodePtr ParseStarExpression() {
    std::size_t start = p_;
    if (AcceptOp("*")) {
      NodePtr value = ParseBitwiseOr();
      NodePtr n = Make(NodeKind::kStarred, start);
      Put(*n, field::kValue, std::move(value));
      return n;
    }
    return ParseExpression();
  }

  NodePtr ParseStarExpressions() {
    std::size_t start = p_;
    NodePtr first = ParseStarExpression();
    if (!IsOp(",")) return first;
    NodePtr tuple = MakeNode(NodeKind::kTuple);
    tuple->list(field::kElts).push_back(std::move(first));
    while (AcceptOp(",")) {
      if (!StartsExpression()) break;
      tuple->list(field::kElts).push_back(ParseStarExpression());
    }
    tuple->span = SpanFrom(start);
    return tuple;
  }

  NodePtr ParseStarNamedExpression() {
    std::size_t start = p_;
    if (AcceptOp("*")) {
      NodePtr value = ParseBitwiseOr();
      NodePtr n = Make(NodeKind::kStarred, start);
      Put(*n, field::kValue, std::move(value));
      return n;
    }
    return ParseNamedExpression();
  }

  NodePtr ParseNamedExpression() {
    std::size_t start = p_;
    if (IsIdentifier() && IsOp(":=", 1)) {
      ++p_;
      NodePtr target = Make(NodeKind::kName, start);
      target->name = std::string(tokens_[start].text);
      ++p_;  // ':='
      NodePtr value = ParseExpression();
      NodePtr n = Make(NodeKind::kNamedExpr, start);
      Put(*n, field::kTarget, std::move(target));
      Put(*n, field::kNamedValue, std::move(value));
      return n;
    }
    NodePtr e = ParseExpression();
    if (IsOp(":=")) {
      Fail(*e, fmt::format("cannot use assignment expressions with {}",
                           DescribeForTarget(*e)));
    }
    return e;
  }

  NodePtr ParseExpression() {
    std::size_t start = p_;
    if (IsKw("lambda")) return ParseLambda();
    NodePtr body = ParseDisjunction();
    if (!IsKw("if")) return body;
    ++p_;
    NodePtr test = ParseDisjunction();
    ExpectKw("else");
    NodePtr orelse = ParseExpression();
    NodePtr n = Make(NodeKind::kIfExp, start);
    Put(*n, field::kIfExpBody, std::move(body));
    Put(*n, field::kIfExpTest, std::move(test));
    Put(*n, field::kIfExpOrelse, std::move(orelse));
    return n;
  }

  NodePtr ParseLambda() {
    std::size_t start = p_;
    ExpectKw("lambda");
    NodePtr args = ParseParameters(":", /*annotations=*/false);
    ExpectOp(":");
    NodePtr body = ParseExpression();
    NodePtr n = Make(NodeKind::kLambda, start);
    Put(*n, field::kLambdaArgs, std::move(args));
    Put(*n, field::kLambdaBody, std::move(body));
    return n;
  }

  NodePtr ParseBoolChain(std::string_view keyword, Op op,
                         NodePtr (Parser::*operand)()) {
    std::size_t start = p_;
    NodePtr first = (this->*operand)();
    if (!IsKw(keyword)) return first;
    NodeList values;
    values.push_back(std::move(first));
    while (AcceptKw(keyword)) values.push_back((this->*operand)());
    NodePtr n = Make(NodeKind::kBoolOp, start);
    n->op = op;
    n->list(field::kValues) = std::move(values);
    return n;
  }

  NodePtr ParseDisjunction() {
    return ParseBoolChain("or", Op::kOr, &Parser::ParseConjunction);
  }

  NodePtr ParseConjunction() {
    return ParseBoolChain("and", Op::kAnd, &Parser::ParseInversion);
  }

  NodePtr ParseInversion() {
    std::size_t start = p_;
    if (AcceptKw("not")) {
      NodePtr operand = ParseInversion();
      NodePtr n = Make(NodeKind::kUnaryOp, start);
      n->op = Op::kNot;
      Put(*n, field::kOperand, std::move(operand));
      return n;
    }
    return ParseComparison();
  }

  bool PeekCompareOp(Op& op, int& width) const {
    width = 1;
    const Token& t = Peek();
    if (t.kind == TokenKind::kOp) {
      if (t.text == "==") op = Op::kEq;
      else if (t.text == "!=") op = Op::kNotEq;
      else if (t.text == "<") op = Op::kLt;
      else if (t.text == "<=") op = Op::kLtE;
      else if (t.text == ">") op = Op::kGt;
      else if (t.text == ">=") op = Op::kGtE;
      else return false;
      return true;
    }
    if (IsKw("in")) {
      op = Op::kIn;
      return true;
    }
    if (IsKw("not") && IsKw("in", 1)) {
      op = Op::kNotIn;
      width = 2;
      return true;
    }
    if (IsKw("is")) {
      if (IsKw("not", 1)) {
        op = Op::kIsNot;
        width = 2;
      } else {
        op = Op::kIs;
      }
      return true;
    }
    return false;
  }

  NodePtr ParseComparison() {
    std::size_t start = p_;
    NodePtr left = ParseBitwiseOr();
    Op op;
    int width;
    if (!PeekCompareOp(op, width)) return left;
    std::vector<Op> ops;
    NodeList comparators;
    while (PeekCompareOp(op, width)) {
      p_ += width;
      ops.push_back(op);
      comparators.push_back(ParseBitwiseOr());
    }
    NodePtr n = Make(NodeKind::kCompare, start);
    n->ops = std::move(ops);
    Put(*n, field::kLeft, std::move(left));
    n->list(field::kComparators) = std::move(comparators);
    return n;
  }

  NodePtr ParseBinaryLevel(int level) {
    static const std::vector<std::vector<std::pair<std::string_view, Op>>>
        kLevels = {
            {{"|", Op::kBitOr}},
            {{"^", Op::kBitXor}},
            {{"&", Op::kBitAnd}},
            {{"<<", Op::kLShift}, {">>", Op::kRShift}},
            {{"+", Op::kAdd}, {"-", Op::kSub}},
            {{"*", Op::kMult},
             {"/", Op::kDiv},
             {"//", Op::kFloorDiv},
             {"%", Op::kMod},
             {"@", Op::kMatMult}},
        };
    if (level == static_cast<int>(kLevels.size())) return ParseFactor();
    std::size_t start = p_;
    NodePtr left = ParseBinaryLevel(level + 1);
    while (true) {
      Op op = Op::kNone;
      for (const auto& [text, candidate] : kLevels[level]) {
        if (IsOp(text)) op = candidate;
      }
      if (op == Op::kNone) break;
      ++p_;
      NodePtr right = ParseBinaryLevel(level + 1);
      NodePtr n = Make(NodeKind::kBinOp, start);
      n->op = op;
      Put(*n, field::kLeft, std::move(left));
      Put(*n, field::kRight, std::move(right));
      left = std::move(n);
    }
    return left;
  }

  NodePtr ParseBitwiseOr() { return ParseBinaryLevel(0); }

  NodePtr ParseFactor() {
    std::size_t start = p_;
    Op op = Op::kNone;
    if (IsOp("-")) op = Op::kUSub;
    else if (IsOp("+")) op = Op::kUAdd;
    else if (IsOp("~")) op = Op::kInvert;
    if (op == Op::kNone) return ParsePower();
    ++p_;
    NodePtr operand = ParseFactor();
    NodePtr n = Make(NodeKind::kUnaryOp, start);
    n->op = op;
    Put(*n, field::kOperand, std::move(operand));
    return n;
  }

  NodePtr ParsePower() {
    std::size_t start = p_;
    NodePtr base = ParseAwaitPrimary();
    if (!AcceptOp("**")) return base;
    NodePtr exponent = ParseFactor();
    NodePtr n = Make(NodeKind::kBinOp, start);
    n->op = Op::kPow;
    Put(*n, field::kLeft, std::move(base));
    Put(*n, field::kRight, std::move(exponent));
    return n;
  }

  NodePtr ParseAwaitPrimary() {
    std::size_t start = p_;
    if (AcceptKw("await")) {
      NodePtr value = ParsePrimary();
      NodePtr n = Make(NodeKind::kAwait, start);
      Put(*n, field::kValue, std::move(value));
      return n;
    }
    return ParsePrimary();
  }

  NodePtr ParsePrimary() {
    std::size_t start = p_;
    NodePtr e = ParseAtom();
    while (true) {
      if (AcceptOp(".")) {
        std::string attr = ExpectName();
        NodePtr n = Make(NodeKind::kAttribute, start);
        n->name = std::move(attr);
        Put(*n, field::kValue, std::move(e));
        e = std::move(n);
      } else if (AcceptOp("(")) {
        NodeList args;
        NodeList keywords;
        ParseCallArguments(args, keywords);
        ExpectOp(")");
        NodePtr n = Make(NodeKind::kCall, start);
        Put(*n, field::kFunc, std::move(e));
        n->list(field::kArgs) = std::move(args);
        n->list(field::kKeywords) = std::move(keywords);
        e = std::move(n);
      } else if (AcceptOp("[")) {
        NodePtr slice = ParseSlices();
        ExpectOp("]");
        NodePtr n = Make(NodeKind::kSubscript, start);
        Put(*n, field::kValue, std::move(e));
        Put(*n, field::kSlice, std::move(slice));
        e = std::move(n);
      } else {
        break;
      }
    }
    return e;
  }

  void ParseCallArguments(NodeList& args, NodeList& keywords) {
    std::size_t open = p_ - 1;
    bool seen_keyword = false;
    bool seen_double_star = false;
    while (!IsOp(")")) {
      std::size_t start = p_;
      if (AcceptOp("*")) {
        if (seen_double_star) {
          Fail(tokens_[start], "iterable argument unpacking follows keyword "
                               "argument unpacking");
        }
        NodePtr value = ParseExpression();
        NodePtr n = Make(NodeKind::kStarred, start);
        Put(*n, field::kValue, std::move(value));
        args.push_back(std::move(n));
      } else if (AcceptOp("**")) {
        NodePtr value = ParseExpression();
        NodePtr n = Make(NodeKind::kKeyword, start);
        Put(*n, field::kValue, std::move(value));
        keywords.push_back(std::move(n));
        seen_double_star = true;
      } else if (IsIdentifier() && IsOp("=", 1)) {
        std::string name(tokens_[p_].text);
        p_ += 2;
        NodePtr value = ParseExpression();
        NodePtr n = Make(NodeKind::kKeyword, start);
        n->name = std::move(name);
        Put(*n, field::kValue, std::move(value));
        keywords.push_back(std::move(n));
        seen_keyword = true;
      } else {
        NodePtr value = ParseNamedExpression();
        if (AtComprehension()) {
          NodeList generators = ParseComprehensions();
          NodePtr g = MakeNode(NodeKind::kGeneratorExp);
          g->span = SpanFrom(open);
          if (IsOp(")")) g->span.end_col += 1;
          Put(*g, field::kElt, std::move(value));
          g->list(field::kGenerators) = std::move(generators);
          value = std::move(g);
          if (!args.empty() || !keywords.empty() || !IsOp(")")) {
            Fail(*value, "Generator expression must be parenthesized");
          }
        }
        if (seen_double_star) {
          Fail(*value, "positional argument follows keyword argument "
                       "unpacking");
        }
        if (seen_keyword) {
          Fail(*value, "positional argument follows keyword argument");
        }
        args.push_back(std::move(value));
      }
      if (!AcceptOp(",")) break;
    }
  }

  NodePtr ParseSlices() {
    std::size_t start = p_;
    NodePtr first = ParseSlice();
    if (!IsOp(",")) return first;
    NodePtr tuple = MakeNode(NodeKind::kTuple);
    tuple->list(field::kElts).push_back(std::move(first));
    while (AcceptOp(",")) {
      if (IsOp("]")) break;
      tuple->list(field::kElts).push_back(ParseSlice());
    }
    tuple->span = SpanFrom(start);
    return tuple;
  }

  bool AtSliceBoundary() const {
    return IsOp(":") || IsOp(",") || IsOp("]");
  }

  NodePtr ParseSlice() {
    std::size_t start = p_;
    NodePtr lower;
    if (!IsOp(":")) {
      NodePtr e = ParseNamedExpression();
      if (!IsOp(":")) return e;
      lower = std::move(e);
    }
    ExpectOp(":");
    NodePtr upper;
    NodePtr step;
    if (!AtSliceBoundary()) upper = ParseExpression();
    if (AcceptOp(":")) {
      if (!AtSliceBoundary()) step = ParseExpression();
    }
    NodePtr n = Make(NodeKind::kSlice, start);
    Put(*n, field::kLower, std::move(lower));
    Put(*n, field::kUpper, std::move(upper));
    Put(*n, field::kStep, std::move(step));
    return n;
  }

  NodeList ParseComprehensions() {
    NodeList generators;
    while (AtComprehension()) {
      std::size_t start = p_;
      bool is_async = AcceptKw("async");
      ExpectKw("for");
      NodePtr target = ParseStarTargets();
      ExpectKw("in");
      NodePtr iter = ParseDisjunction();
      NodeList ifs;
      while (AcceptKw("if")) ifs.push_back(ParseDisjunction());
      NodePtr c = Make(NodeKind::kComprehension, start);
      c->flag = is_async ? 1 : 0;
      Put(*c, field::kTarget, std::move(target));
      Put(*c, field::kCompIter, std::move(iter));
      c->list(field::kCompIfs) = std::move(ifs);
      generators.push_back(std::move(c));
    }
    return generators;
  }

  bool AtClose(bool at_end) const {
    return at_end ? Peek().kind == TokenKind::kEndMarker : IsOp(")");
  }

  // Contents of "(...)": empty tuple, yield, generator, tuple or a
  // parenthesized expression. `start` is the index of "(" when present.
  NodePtr ParseParenContents(std::size_t start, bool at_end) {
    if (AtClose(at_end)) {
      if (at_end) Fail(Peek(), "f-string: empty expression not allowed");
      ++p_;
      return Make(NodeKind::kTuple, start);
    }
    if (IsKw("yield")) {
      NodePtr e = ParseYieldExpr();
      if (!at_end) ExpectOp(")");
      e->parenthesized = true;
      return e;
    }
    NodePtr first = ParseStarNamedExpression();
    if (AtComprehension()) {
      if (first->kind == NodeKind::kStarred) {
        Fail(*first, "iterable unpacking cannot be used in comprehension");
      }
      NodeList generators = ParseComprehensions();
      if (!at_end) ExpectOp(")");
      NodePtr g = Make(NodeKind::kGeneratorExp, start);
      Put(*g, field::kElt, std::move(first));
      g->list(field::kGenerators) = std::move(generators);
      return g;
    }
    if (IsOp(",")) {
      NodeList elts;
      elts.push_back(std::move(first));
      while (AcceptOp(",")) {
        if (AtClose(at_end)) break;
        elts.push_back(ParseStarNamedExpression());
      }
      if (!at_end) ExpectOp(")");
      NodePtr t = Make(NodeKind::kTuple, start);
      t->list(field::kElts) = std::move(elts);
      t->parenthesized = true;
      return t;
    }
    if (!at_end) ExpectOp(")");
    if (first->kind == NodeKind::kStarred) {
      Fail(*first, "cannot use starred expression here");
    }
    first->parenthesized = true;
    return first;
  }

  NodePtr ParseListDisplay() {
    std::size_t start = p_;
    ExpectOp("[");
    NodeList elts;
    if (!IsOp("]")) {
      NodePtr first = ParseStarNamedExpression();
      if (AtComprehension()) {
        if (first->kind == NodeKind::kStarred) {
          Fail(*first, "iterable unpacking cannot be used in comprehension");
        }
        NodeList generators = ParseComprehensions();
        ExpectOp("]");
        NodePtr n = Make(NodeKind::kListComp, start);
        Put(*n, field::kElt, std::move(first));
        n->list(field::kGenerators) = std::move(generators);
        return n;
      }
      elts.push_back(std::move(first));
      while (AcceptOp(",")) {
        if (IsOp("]")) break;
        elts.push_back(ParseStarNamedExpression());
      }
    }
    ExpectOp("]");
    NodePtr n = Make(NodeKind::kList, start);
    n->list(field::kElts) = std::move(elts);
    return n;
  }

  void ParseDictItem(NodeList& keys, NodeList& values) {
    if (AcceptOp("**")) {
      keys.push_back(nullptr);
      values.push_back(ParseBitwiseOr());
      return;
    }
    keys.push_back(ParseExpression());
    ExpectOp(":");
    values.push_back(ParseExpression());
  }

  NodePtr ParseBraceDisplay() {
    std::size_t start = p_;
    ExpectOp("{");
    if (AcceptOp("}")) return Make(NodeKind::kDict, start);
    NodeList keys;
    NodeList values;
    if (!IsOp("**")) {
      NodePtr first = ParseStarNamedExpression();
      if (!AcceptOp(":")) {
        // Set display or set comprehension.
        if (AtComprehension()) {
          if (first->kind == NodeKind::kStarred) {
            Fail(*first,
                 "iterable unpacking cannot be used in comprehension");
          }
          NodeList generators = ParseComprehensions();
          ExpectOp("}");
          NodePtr n = Make(NodeKind::kSetComp, start);
          Put(*n, field::kElt, std::move(first));
          n->list(field::kGenerators) = std::move(generators);
          return n;
        }
        NodeList elts;
        elts.push_back(std::move(first));
        while (AcceptOp(",")) {
          if (IsOp("}")) break;
          elts.push_back(ParseStarNamedExpression());
        }
        ExpectOp("}");
        NodePtr n = Make(NodeKind::kSet, start);
        n->list(field::kElts) = std::move(elts);
        return n;
      }
      if (first->kind == NodeKind::kStarred) {
        Fail(*first, "cannot use a starred expression in a dictionary value");
      }
      NodePtr value = ParseExpression();
      if (AtComprehension()) {
        NodeList generators = ParseComprehensions();
        ExpectOp("}");
        NodePtr n = Make(NodeKind::kDictComp, start);
        Put(*n, field::kCompKey, std::move(first));
        Put(*n, field::kCompValue, std::move(value));
        n->list(field::kDictCompGenerators) = std::move(generators);
        return n;
      }
      keys.push_back(std::move(first));
      values.push_back(std::move(value));
      if (!AcceptOp(",")) {
        ExpectOp("}");
        NodePtr n = Make(NodeKind::kDict, start);
        n->list(field::kKeys) = std::move(keys);
        n->list(field::kDictValues) = std::move(values);
        return n;
      }
    }
    while (!IsOp("}")) {
      ParseDictItem(keys, values);
      if (!AcceptOp(",")) break;
    }
    ExpectOp("}");
    NodePtr n = Make(NodeKind::kDict, start);
    n->list(field::kKeys) = std::move(keys);
    n->list(field::kDictValues) = std::move(values);
    return n;
  }

  NodePtr ParseNumber() {
    std::size_t start = p_;
    const Token& t = tokens_[p_++];
    NodePtr n = Make(NodeKind::kConstant, start);
    std::string_view text = t.text;
    bool prefixed = text.size() > 1 && text[0] == '0' &&
                    std::string_view("xXoObB").find(text[1]) !=
                        std::string_view::npos;
    try {
      if (text.back() == 'j' || text.back() == 'J') {
        n->constant.kind = Constant::Kind::kComplex;
        n->constant.number = ParseFloatLiteral(text);
      } else if (!prefixed && text.find_first_of(".eE") !=
                                  std::string_view::npos) {
        n->constant.kind = Constant::Kind::kFloat;
        n->constant.number = ParseFloatLiteral(text);
      } else {
        n->constant.kind = Constant::Kind::kInt;
        n->constant.text = ParseIntLiteral(text);
      }
    } catch (const LiteralError& e) {
      Fail(t, e.what());
    }
    return n;
  }

  // Line/column of byte `offset` within string token `t`.
  static std::pair<int, int> PositionIn(const Token& t, std::size_t offset) {
    int line = t.line;
    int col = t.col;
    std::size_t line_begin = 0;
    bool moved = false;
    for (std::size_t i = 0; i < offset && i < t.text.size(); ++i) {
      if (t.text[i] == '\n') {
        ++line;
        line_begin = i + 1;
        moved = true;
      }
    }
    if (moved) {
      col = static_cast<int>(offset - line_begin);
    } else {
      col += static_cast<int>(offset);
    }
    return {line, col};
  }

  std::string DecodeOrFail(const Token& t, std::string_view body, bool raw,
                           bool bytes) const {
    try {
      return DecodeStringBody(body, raw, bytes);
    } catch (const LiteralError& e) {
      Fail(t, e.what());
    }
  }

  // Parses the body of an f-string (or of a format spec when level > 0)
  // starting at `i`. Returns with `i` at the closing '}' of a format spec,
  // or at the end of `body`.
  void ParseFStringBody(const Token& t, std::string_view body,
                        std::size_t body_offset, bool raw, int level,
                        JoinedBuilder& acc, std::size_t& i) {
    const std::size_t n = body.size();
    while (i < n) {
      // Literal run.
      std::size_t lit_start = i;
      bool doubled = false;
      while (i < n) {
        char ch = body[i++];
        if (!raw && ch == '\\' && i < n) {
          ch = body[i++];
          if (ch == 'N') Fail(t, "\\N{...} escapes are not supported");
        }
        if (ch == '{' || ch == '}') {
          if (level == 0) {
            if (i < n && body[i] == ch) {
              doubled = true;
              break;
            }
            if (ch == '}') Fail(t, "f-string: single '}' is not allowed");
          }
          --i;
          break;
        }
      }
      if (i > lit_start) {
        std::string_view segment = body.substr(lit_start, i - lit_start);
        acc.pending += raw ? std::string(segment)
                           : DecodeOrFail(t, segment, false, false);
      }
      if (doubled) {
        ++i;  // Skip the second brace.
        continue;
      }
      if (i >= n) break;
      if (body[i] == '}') {
        // End of a format spec; the caller consumes it.
        return;
      }
      ParseReplacementField(t, body, body_offset, raw, level, acc, i);
    }
    if (level > 0) Fail(t, "f-string: expecting '}'");
  }

  void ParseReplacementField(const Token& t, std::string_view body,
                             std::size_t body_offset, bool raw, int level,
                             JoinedBuilder& acc, std::size_t& i) {
    const std::size_t n = body.size();
    if (level >= 2) Fail(t, "f-string: expressions nested too deeply");
    ++i;  // '{'
    std::size_t expr_start = i;
    char quote_char = 0;
    int string_type = 0;
    std::vector<char> parens;
    while (i < n) {
      char ch = body[i];
      if (ch == '\\') {
        Fail(t, "f-string expression part cannot include a backslash");
      }
      if (quote_char) {
        if (ch == quote_char) {
          if (string_type == 3) {
            if (i + 2 < n && body[i + 1] == ch && body[i + 2] == ch) {
              i += 3;
              quote_char = 0;
              continue;
            }
          } else {
            quote_char = 0;
          }
        }
        ++i;
        continue;
      }
      if (ch == '\'' || ch == '"') {
        if (i + 2 < n && body[i + 1] == ch && body[i + 2] == ch) {
          string_type = 3;
          i += 2;
        } else {
          string_type = 1;
        }
        quote_char = ch;
        ++i;
        continue;
      }
      if (ch == '[' || ch == '(' || ch == '{') {
        if (parens.size() >= 200) {
          Fail(t, "f-string: too many nested parenthesis");
        }
        parens.push_back(ch);
      } else if (ch == '#') {
        Fail(t, "f-string expression part cannot include '#'");
      } else if (parens.empty() &&
                 (ch == '!' || ch == ':' || ch == '}' || ch == '=' ||
                  ch == '>' || ch == '<')) {
        if (i + 1 < n) {
          char next = body[i + 1];
          if (next == '=' &&
              (ch == '!' || ch == '=' || ch == '<' || ch == '>')) {
            i += 2;
            continue;
          }
        }
        if (ch == '>' || ch == '<') {
          ++i;
          continue;
        }
        break;
      } else if (ch == ']' || ch == ')' || ch == '}') {
        if (parens.empty()) Fail(t, fmt::format("f-string: unmatched '{}'", ch));
        char open = parens.back();
        parens.pop_back();
        if (!((open == '(' && ch == ')') || (open == '[' && ch == ']') ||
              (open == '{' && ch == '}'))) {
          Fail(t, fmt::format("f-string: closing parenthesis '{}' does not "
                              "match opening parenthesis '{}'",
                              ch, open));
        }
      }
      ++i;
    }
    if (quote_char) Fail(t, "f-string: unterminated string");
    if (!parens.empty()) {
      Fail(t, fmt::format("f-string: unmatched '{}'", parens.back()));
    }
    if (i >= n) Fail(t, "f-string: expecting '}'");

    std::string_view expr_text = body.substr(expr_start, i - expr_start);
    bool blank = true;
    for (char c : expr_text) {
      if (!IsPySpace(c)) blank = false;
    }
    if (blank) Fail(t, "f-string: empty expression not allowed");

    auto [line, col] = PositionIn(t, body_offset + expr_start);
    std::string owned(expr_text);
    NodePtr value;
    {
      Parser sub(owned, LexOptions{line, col, /*bracketed=*/true});
      value = sub.ParseFStringExpression();
    }

    std::string debug_text;
    bool debug = false;
    if (body[i] == '=') {
      ++i;
      while (i < n && IsPySpace(body[i])) ++i;
      if (i >= n) Fail(t, "f-string: expecting '}'");
      debug = true;
      debug_text = std::string(body.substr(expr_start, i - expr_start));
    }
    int conversion = -1;
    if (body[i] == '!') {
      ++i;
      if (i >= n) Fail(t, "f-string: expecting '}'");
      char c = body[i++];
      if (c != 's' && c != 'r' && c != 'a') {
        Fail(t, "f-string: invalid conversion character: expected 's', "
                "'r', or 'a'");
      }
      conversion = c;
    }
    NodePtr format_spec;
    if (i < n && body[i] == ':') {
      ++i;
      JoinedBuilder spec;
      spec.span = acc.span;
      ParseFStringBody(t, body, body_offset, raw, level + 1, spec, i);
      spec.Flush();
      format_spec = MakeNode(NodeKind::kJoinedStr);
      format_spec->span = acc.span;
      format_spec->list(field::kValues) = std::move(spec.values);
    }
    if (i >= n || body[i] != '}') Fail(t, "f-string: expecting '}'");
    ++i;
    if (debug && !format_spec && conversion == -1) conversion = 'r';

    auto [end_line, end_col] = PositionIn(t, body_offset + i);
    NodePtr fv = MakeNode(NodeKind::kFormattedValue);
    fv->span = Span{line, col - 1, end_line, end_col};
    fv->flag = conversion;
    Put(*fv, field::kValue, std::move(value));
    Put(*fv, field::kFormatSpec, std::move(format_spec));
    acc.pending += debug_text;
    acc.Flush();
    acc.values.push_back(std::move(fv));
  }

  NodePtr ParseStrings() {
    std::size_t start = p_;
    std::size_t end = p_;
    while (tokens_[end].kind == TokenKind::kString) ++end;
    bool any_f = false;
    bool any_bytes = false;
    bool any_str = false;
    for (std::size_t k = start; k < end; ++k) {
      StringPrefix prefix = ReadPrefix(tokens_[k].text);
      any_f |= prefix.fstring;
      (prefix.bytes ? any_bytes : any_str) = true;
    }
    if (any_bytes && any_str) {
      Fail(tokens_[start], "cannot mix bytes and nonbytes literals");
    }
    p_ = end;
    Span span = SpanFrom(start);

    auto body_of = [](const Token& t, const StringPrefix& prefix,
                      std::size_t& offset) {
      std::size_t quote_len =
          t.text.size() >= prefix.length + 6 &&
                  t.text[prefix.length] == t.text[prefix.length + 1] &&
                  t.text[prefix.length] == t.text[prefix.length + 2]
              ? 3
              : 1;
      offset = prefix.length + quote_len;
      return t.text.substr(offset, t.text.size() - offset - quote_len);
    };

    if (!any_f) {
      NodePtr n = MakeNode(NodeKind::kConstant);
      n->span = span;
      n->constant.kind =
          any_bytes ? Constant::Kind::kBytes : Constant::Kind::kStr;
      n->constant.u_prefix = ReadPrefix(tokens_[start].text).unicode;
      for (std::size_t k = start; k < end; ++k) {
        const Token& t = tokens_[k];
        StringPrefix prefix = ReadPrefix(t.text);
        std::size_t offset;
        std::string_view body = body_of(t, prefix, offset);
        n->constant.text += DecodeOrFail(t, body, prefix.raw, prefix.bytes);
      }
      return n;
    }

    JoinedBuilder acc;
    acc.span = span;
    for (std::size_t k = start; k < end; ++k) {
      const Token& t = tokens_[k];
      StringPrefix prefix = ReadPrefix(t.text);
      std::size_t offset;
      std::string_view body = body_of(t, prefix, offset);
      if (!prefix.fstring) {
        acc.pending += DecodeOrFail(t, body, prefix.raw, false);
        continue;
      }
      std::size_t i = 0;
      ParseFStringBody(t, body, offset, prefix.raw, 0, acc, i);
    }
    acc.Flush();
    NodePtr n = MakeNode(NodeKind::kJoinedStr);
    n->span = span;
    n->list(field::kValues) = std::move(acc.values);
    return n;
  }

  NodePtr ParseAtom() {
    std::size_t start = p_;
    const Token& t = Peek();
    switch (t.kind) {
      case TokenKind::kNumber:
        return ParseNumber();
      case TokenKind::kString:
        return ParseStrings();
      case TokenKind::kName: {
        if (t.text == "True" || t.text == "False" || t.text == "None") {
          ++p_;
          NodePtr n = Make(NodeKind::kConstant, start);
          n->constant.kind = t.text == "True"    ? Constant::Kind::kTrue
                             : t.text == "False" ? Constant::Kind::kFalse
                                                 : Constant::Kind::kNone;
          return n;
        }
        if (IsKeyword(t.text)) Fail(t, kInvalidSyntax);
        ++p_;
        NodePtr n = Make(NodeKind::kName, start);
        n->name = std::string(t.text);
        return n;
      }
      case TokenKind::kOp:
        if (t.text == "(") {
          ++p_;
          return ParseParenContents(start, /*at_end=*/false);
        }
        if (t.text == "[") return ParseListDisplay();
        if (t.text == "{") return ParseBraceDisplay();
        if (t.text == "...") {
          ++p_;
          NodePtr n = Make(NodeKind::kConstant, start);
          n->constant.kind = Constant::Kind::kEllipsis;
          return n;
        }
        break;
      case TokenKind::kIndent:
        Fail(t, "unexpected indent");
      case TokenKind::kDedent:
      case TokenKind::kNewline:
      case TokenKind::kEndMarker:
        Fail(t, kInvalidSyntax);
    }
    Fail(t, kInvalidSyntax);
  }

  std::vector<Token> tokens_;
  std::size_t p_ = 0;
};

}  // namespace

NodePtr Parse(std::string_view source) {
  if (source.find('\r') == std::string_view::npos) {
    return Parser(source, LexOptions{}).ParseModule();
  }
  // Universal newlines, as the interpreter reads source files.
  std::string normalized;
  normalized.reserve(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i] == '\r') {
      normalized.push_back('\n');
      if (i + 1 < source.size() && source[i + 1] == '\n') ++i;
    } else {
      normalized.push_back(source[i]);
    }
  }
  return Parser(normalized, LexOptions{}).ParseModule();
}

bool Parses(std::string_view source) {
  try {
    Parse(source);
    return true;
  } catch (const SyntaxError&) {
    return false;
  }
}

}  // namespace mist::py
