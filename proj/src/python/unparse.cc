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

#include "mist/python/unparse.h"

#include <algorithm>
#include <functional>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mist/errors.h"
#include "mist/python/literals.h"

namespace mist::py {
namespace {

enum Precedence : int {
  kTuple = 1,
  kYield,
  kTest,
  kOr,
  kAnd,
  kNot,
  kCmp,
  kExpr,
  kBor = kExpr,
  kBxor,
  kBand,
  kShift,
  kArith,
  kTerm,
  kFactor,
  kPower,
  kAwait,
  kAtom,
};

Precedence Next(Precedence p) {
  return p == kAtom ? kAtom : static_cast<Precedence>(p + 1);
}

// Written in place of infinities; overflows to inf when parsed.
constexpr std::string_view kInfStr = "1e309";

const std::vector<std::string> kAllQuotes = {"'", "\"", "\"\"\"", "'''"};
const std::vector<std::string> kMultiQuotes = {"\"\"\"", "'''"};

Precedence BinOpPrecedence(Op op) {
  switch (op) {
    case Op::kAdd:
    case Op::kSub: return kArith;
    case Op::kMult:
    case Op::kMatMult:
    case Op::kDiv:
    case Op::kMod:
    case Op::kFloorDiv: return kTerm;
    case Op::kLShift:
    case Op::kRShift: return kShift;
    case Op::kBitOr: return kBor;
    case Op::kBitXor: return kBxor;
    case Op::kBitAnd: return kBand;
    case Op::kPow: return kPower;
    default: return kTest;
  }
}

std::string ReplaceAll(std::string text, std::string_view from,
                       std::string_view to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

// Escapes a str value for a literal and narrows the usable quote styles.
std::pair<std::string, std::vector<std::string>> StrLiteralHelper(
    const std::string& value, const std::vector<std::string>& quote_types,
    bool escape_special_whitespace) {
  std::string escaped;
  for (char32_t c : DecodeUtf8(value)) {
    if (!escape_special_whitespace && (c == '\n' || c == '\t')) {
      AppendUtf8(c, escaped);
    } else if (c == '\\' || !IsPrintable(c)) {
      escaped += UnicodeEscape(c);
    } else {
      AppendUtf8(c, escaped);
    }
  }
  std::vector<std::string> possible;
  bool has_newline = escaped.find('\n') != std::string::npos;
  for (const std::string& q : quote_types) {
    if (has_newline && q.size() != 3) continue;
    if (escaped.find(q) != std::string::npos) continue;
    possible.push_back(q);
  }
  if (possible.empty()) {
    std::string repr = StrRepr(value);
    std::string quote(1, repr[0]);
    for (const std::string& q : quote_types) {
      if (q.find(repr[0]) != std::string::npos) {
        quote = q;
        break;
      }
    }
    return {repr.substr(1, repr.size() - 2), {quote}};
  }
  if (!escaped.empty()) {
    char last = escaped.back();
    std::stable_sort(possible.begin(), possible.end(),
                     [last](const std::string& a, const std::string& b) {
                       return (a[0] == last) < (b[0] == last);
                     });
    if (possible[0][0] == last) {
      escaped.insert(escaped.size() - 1, "\\");
    }
  }
  return {escaped, possible};
}

class Unparser {
 public:
  Unparser(bool avoid_backslashes, const Node* target,
           const Node* replacement)
      : avoid_backslashes_(avoid_backslashes),
        target_(target),
        replacement_(replacement) {}

  std::string Visit(const Node& node) {
    source_.clear();
    wrote_ = false;
    Traverse(node);
    return source_;
  }

  void SetPrecedence(Precedence p, const Node* node) {
    if (node) precedences_[node] = p;
  }

 private:
  const Node& Resolve(const Node& node) const {
    return &node == target_ ? *replacement_ : node;
  }
  const Node* Resolve(const Node* node) const {
    return node == target_ ? replacement_ : node;
  }

  void Write(std::string_view text) {
    source_ += text;
    wrote_ = true;
  }
  void MaybeNewline() {
    if (wrote_) Write("\n");
  }
  void Fill(std::string_view text = "") {
    MaybeNewline();
    Write(std::string(4 * indent_, ' '));
    Write(text);
  }

  Precedence GetPrecedence(const Node& node) const {
    auto it = precedences_.find(&node);
    return it == precedences_.end() ? kTest : it->second;
  }

  // Emits "(" ... ")" around `body` when the node binds looser than `p`.
  template <typename F>
  void RequireParens(Precedence p, const Node& node, F&& body) {
    bool parens = GetPrecedence(node) > p;
    if (parens) Write("(");
    body();
    if (parens) Write(")");
  }

  template <typename F>
  void Block(F&& body) {
    Write(":");
    ++indent_;
    body();
    --indent_;
  }

  void Traverse(const Node& node) {
    if (&node == target_) {
      auto it = precedences_.find(&node);
      if (it != precedences_.end()) precedences_[replacement_] = it->second;
      Dispatch(*replacement_);
      return;
    }
    Dispatch(node);
  }
  void Traverse(const Node* node) {
    if (node) Traverse(*node);
  }
  void TraverseList(const NodeList& nodes) {
    for (const NodePtr& n : nodes) Traverse(n.get());
  }

  template <typename F>
  void Interleave(const NodeList& items, F&& each) {
    bool first = true;
    for (const NodePtr& item : items) {
      if (!first) Write(", ");
      first = false;
      each(*item);
    }
  }
  void CommaSeparated(const NodeList& items) {
    Interleave(items, [this](const Node& n) { Traverse(n); });
  }
  void ItemsView(const NodeList& items) {
    if (items.size() == 1) {
      Traverse(*items[0]);
      Write(",");
    } else {
      CommaSeparated(items);
    }
  }

  const Node* GetRawDocstring(const Node& node) const {
    const NodeList* body = nullptr;
    switch (node.kind) {
      case NodeKind::kModule: body = &node.list(field::kBody); break;
      case NodeKind::kFunctionDef:
      case NodeKind::kAsyncFunctionDef: body = &node.list(field::kDefBody); break;
      case NodeKind::kClassDef: body = &node.list(field::kClassBody); break;
      default: return nullptr;
    }
    if (body->empty()) return nullptr;
    const Node& stmt = Resolve(*body->front());
    if (stmt.kind != NodeKind::kExpr) return nullptr;
    const Node* value = Resolve(stmt.child(field::kValue));
    if (value && value->kind == NodeKind::kConstant &&
        value->constant.kind == Constant::Kind::kStr) {
      return value;
    }
    return nullptr;
  }

  void WriteDocstringAndBody(const Node& node, const NodeList& body) {
    if (const Node* doc = GetRawDocstring(node)) {
      Fill();
      if (doc->constant.u_prefix) Write("u");
      WriteStrAvoidingBackslashes(doc->constant.text, kMultiQuotes);
      for (std::size_t i = 1; i < body.size(); ++i) Traverse(*body[i]);
    } else {
      TraverseList(body);
    }
  }

  void WriteStrAvoidingBackslashes(const std::string& value,
                                   const std::vector<std::string>& quotes) {
    auto [text, quote_types] = StrLiteralHelper(value, quotes, false);
    const std::string& q = quote_types[0];
    Write(q);
    Write(text);
    Write(q);
  }

  void WriteConstant(const Constant& c) {
    switch (c.kind) {
      case Constant::Kind::kFloat:
      case Constant::Kind::kComplex: {
        std::string repr = ConstantRepr(c);
        repr = ReplaceAll(std::move(repr), "inf", kInfStr);
        repr = ReplaceAll(std::move(repr), "nan",
                          "(" + std::string(kInfStr) + "-" +
                              std::string(kInfStr) + ")");
        Write(repr);
        return;
      }
      case Constant::Kind::kStr:
        if (avoid_backslashes_) {
          WriteStrAvoidingBackslashes(c.text, kAllQuotes);
          return;
        }
        Write(StrRepr(c.text));
        return;
      default:
        Write(ConstantRepr(c));
        return;
    }
  }

  // f-string helpers: write into `out` instead of the main source.

  void FStringJoinedStr(const Node& node, std::string& out) {
    for (const NodePtr& value : node.list(field::kValues)) {
      FStringPart(Resolve(*value), out);
    }
  }

  void FStringPart(const Node& value, std::string& out) {
    if (value.kind == NodeKind::kConstant) {
      if (value.constant.kind != Constant::Kind::kStr) {
        throw DomainError("Constants inside JoinedStr should be a string.");
      }
      out += ReplaceAll(ReplaceAll(value.constant.text, "{", "{{"), "}", "}}");
    } else if (value.kind == NodeKind::kFormattedValue) {
      FStringFormattedValue(value, out);
    } else if (value.kind == NodeKind::kJoinedStr) {
      FStringJoinedStr(value, out);
    } else {
      throw DomainError("unexpected node inside f-string");
    }
  }

  void FStringFormattedValue(const Node& node, std::string& out) {
    out += "{";
    Unparser inner(/*avoid_backslashes=*/true, target_, replacement_);
    const Node* value = node.child(field::kValue);
    inner.SetPrecedence(Next(kTest), value);
    std::string expr = inner.Visit(*value);
    if (!expr.empty() && expr[0] == '{') out += " ";
    if (expr.find('\\') != std::string::npos) {
      throw DomainError("Unable to avoid backslash in f-string expression part");
    }
    out += expr;
    if (node.flag != -1) {
      out += "!";
      out += static_cast<char>(node.flag);
    }
    if (const Node* spec = node.child(field::kFormatSpec)) {
      out += ":";
      FStringPart(Resolve(*spec), out);
    }
    out += "}";
  }

  void VisitJoinedStr(const Node& node) {
    Write("f");
    if (avoid_backslashes_) {
      std::string buffer;
      FStringJoinedStr(node, buffer);
      WriteStrAvoidingBackslashes(buffer, kAllQuotes);
      return;
    }
    std::vector<std::pair<std::string, bool>> pieces;
    for (const NodePtr& v : node.list(field::kValues)) {
      const Node& value = Resolve(*v);
      std::string buffer;
      FStringPart(value, buffer);
      pieces.emplace_back(std::move(buffer),
                          value.kind == NodeKind::kConstant);
    }
    std::vector<std::string> quote_types = kAllQuotes;
    std::string joined;
    for (const auto& [piece, is_constant] : pieces) {
      auto [text, narrowed] =
          StrLiteralHelper(piece, quote_types, is_constant);
      joined += text;
      quote_types = std::move(narrowed);
    }
    Write(quote_types[0]);
    Write(joined);
    Write(quote_types[0]);
  }

  void VisitArguments(const Node& node) {
    bool first = true;
    const NodeList& posonly = node.list(field::kPosonlyArgs);
    const NodeList& args = node.list(field::kPosArgs);
    const NodeList& defaults = node.list(field::kDefaults);
    std::vector<const Node*> all;
    for (const NodePtr& a : posonly) all.push_back(a.get());
    for (const NodePtr& a : args) all.push_back(a.get());
    std::size_t pad = all.size() - defaults.size();
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (first) {
        first = false;
      } else {
        Write(", ");
      }
      Traverse(*all[i]);
      if (i >= pad) {
        Write("=");
        Traverse(*defaults[i - pad]);
      }
      if (i + 1 == posonly.size()) Write(", /");
    }
    const Node* vararg = node.child(field::kVararg);
    const NodeList& kwonly = node.list(field::kKwonlyArgs);
    if (vararg || !kwonly.empty()) {
      if (first) {
        first = false;
      } else {
        Write(", ");
      }
      Write("*");
      if (vararg) {
        Write(vararg->name);
        if (const Node* ann = vararg->child(field::kArgAnnotation)) {
          Write(": ");
          Traverse(*ann);
        }
      }
    }
    const NodeList& kw_defaults = node.list(field::kKwDefaults);
    for (std::size_t i = 0; i < kwonly.size(); ++i) {
      Write(", ");
      Traverse(*kwonly[i]);
      if (i < kw_defaults.size() && kw_defaults[i]) {
        Write("=");
        Traverse(*kw_defaults[i]);
      }
    }
    if (const Node* kwarg = node.child(field::kKwarg)) {
      if (!first) Write(", ");
      Write("**");
      Write(kwarg->name);
      if (const Node* ann = kwarg->child(field::kArgAnnotation)) {
        Write(": ");
        Traverse(*ann);
      }
    }
  }

  void FunctionHelper(const Node& node, std::string_view keyword) {
    MaybeNewline();
    for (const NodePtr& deco : node.list(field::kDecorators)) {
      Fill("@");
      Traverse(*deco);
    }
    Fill(std::string(keyword) + " " + node.name);
    Write("(");
    Traverse(node.child(field::kDefArgs));
    Write(")");
    if (const Node* returns = node.child(field::kDefReturns)) {
      Write(" -> ");
      Traverse(*returns);
    }
    Block([&] { WriteDocstringAndBody(node, node.list(field::kDefBody)); });
  }

  void ElseBlock(const NodeList& orelse) {
    if (orelse.empty()) return;
    Fill("else");
    Block([&] { TraverseList(orelse); });
  }

  void Dispatch(const Node& node) {
    switch (node.kind) {
      case NodeKind::kModule:
        WriteDocstringAndBody(node, node.list(field::kBody));
        return;

      case NodeKind::kFunctionDef:
        FunctionHelper(node, "def");
        return;
      case NodeKind::kAsyncFunctionDef:
        FunctionHelper(node, "async def");
        return;

      case NodeKind::kClassDef: {
        MaybeNewline();
        for (const NodePtr& deco : node.list(field::kDecorators)) {
          Fill("@");
          Traverse(*deco);
        }
        Fill("class " + node.name);
        const NodeList& bases = node.list(field::kClassBases);
        const NodeList& keywords = node.list(field::kClassKeywords);
        if (!bases.empty() || !keywords.empty()) {
          Write("(");
          bool comma = false;
          for (const NodeList* list : {&bases, &keywords}) {
            for (const NodePtr& e : *list) {
              if (comma) Write(", ");
              comma = true;
              Traverse(*e);
            }
          }
          Write(")");
        }
        Block([&] {
          WriteDocstringAndBody(node, node.list(field::kClassBody));
        });
        return;
      }

      case NodeKind::kReturn:
        Fill("return");
        if (const Node* value = node.child(field::kValue)) {
          Write(" ");
          Traverse(*value);
        }
        return;

      case NodeKind::kDelete:
        Fill("del ");
        CommaSeparated(node.list(field::kTargets));
        return;

      case NodeKind::kAssign:
        Fill();
        for (const NodePtr& target : node.list(field::kTargets)) {
          Traverse(*target);
          Write(" = ");
        }
        Traverse(node.child(field::kAssignValue));
        return;

      case NodeKind::kAugAssign:
        Fill();
        Traverse(node.child(field::kTarget));
        Write(" ");
        Write(OpSymbol(node.op));
        Write("= ");
        Traverse(node.child(field::kAugValue));
        return;

      case NodeKind::kAnnAssign: {
        Fill();
        const Node& target = Resolve(*node.child(field::kTarget));
        bool parens = node.flag == 0 && target.kind == NodeKind::kName;
        if (parens) Write("(");
        Traverse(node.child(field::kTarget));
        if (parens) Write(")");
        Write(": ");
        Traverse(node.child(field::kAnnotation));
        if (const Node* value = node.child(field::kAnnValue)) {
          Write(" = ");
          Traverse(*value);
        }
        return;
      }

      case NodeKind::kFor:
      case NodeKind::kAsyncFor:
        Fill(node.kind == NodeKind::kFor ? "for " : "async for ");
        Traverse(node.child(field::kTarget));
        Write(" in ");
        Traverse(node.child(field::kForIter));
        Block([&] { TraverseList(node.list(field::kForBody)); });
        ElseBlock(node.list(field::kForOrelse));
        return;

      case NodeKind::kWhile:
        Fill("while ");
        Traverse(node.child(field::kTest));
        Block([&] { TraverseList(node.list(field::kCondBody)); });
        ElseBlock(node.list(field::kCondOrelse));
        return;

      case NodeKind::kIf: {
        Fill("if ");
        Traverse(node.child(field::kTest));
        Block([&] { TraverseList(node.list(field::kCondBody)); });
        const Node* current = &node;
        while (current->list(field::kCondOrelse).size() == 1 &&
               Resolve(*current->list(field::kCondOrelse)[0]).kind ==
                   NodeKind::kIf) {
          current = &Resolve(*current->list(field::kCondOrelse)[0]);
          Fill("elif ");
          Traverse(current->child(field::kTest));
          Block([&] { TraverseList(current->list(field::kCondBody)); });
        }
        ElseBlock(current->list(field::kCondOrelse));
        return;
      }

      case NodeKind::kWith:
      case NodeKind::kAsyncWith:
        Fill(node.kind == NodeKind::kWith ? "with " : "async with ");
        CommaSeparated(node.list(field::kWithItems));
        Block([&] { TraverseList(node.list(field::kWithBody)); });
        return;

      case NodeKind::kRaise:
        Fill("raise");
        if (const Node* exc = node.child(field::kExc)) {
          Write(" ");
          Traverse(*exc);
          if (const Node* cause = node.child(field::kCause)) {
            Write(" from ");
            Traverse(*cause);
          }
        }
        return;

      case NodeKind::kTry:
        Fill("try");
        Block([&] { TraverseList(node.list(field::kTryBody)); });
        TraverseList(node.list(field::kHandlers));
        ElseBlock(node.list(field::kTryOrelse));
        if (!node.list(field::kFinalbody).empty()) {
          Fill("finally");
          Block([&] { TraverseList(node.list(field::kFinalbody)); });
        }
        return;

      case NodeKind::kExceptHandler:
        Fill("except");
        if (const Node* type = node.child(field::kHandlerType)) {
          Write(" ");
          Traverse(*type);
        }
        if (!node.name.empty()) {
          Write(" as ");
          Write(node.name);
        }
        Block([&] { TraverseList(node.list(field::kHandlerBody)); });
        return;

      case NodeKind::kAssert:
        Fill("assert ");
        Traverse(node.child(field::kAssertTest));
        if (const Node* msg = node.child(field::kAssertMsg)) {
          Write(", ");
          Traverse(*msg);
        }
        return;

      case NodeKind::kImport:
        Fill("import ");
        CommaSeparated(node.list(field::kAliases));
        return;

      case NodeKind::kImportFrom:
        Fill("from ");
        Write(std::string(node.flag, '.'));
        Write(node.name);
        Write(" import ");
        CommaSeparated(node.list(field::kAliases));
        return;

      case NodeKind::kGlobal:
      case NodeKind::kNonlocal: {
        Fill(node.kind == NodeKind::kGlobal ? "global " : "nonlocal ");
        bool first = true;
        for (const std::string& name : node.names) {
          if (!first) Write(", ");
          first = false;
          Write(name);
        }
        return;
      }

      case NodeKind::kExpr:
        Fill();
        SetPrecedence(kYield, node.child(field::kValue));
        Traverse(node.child(field::kValue));
        return;

      case NodeKind::kPass: Fill("pass"); return;
      case NodeKind::kBreak: Fill("break"); return;
      case NodeKind::kContinue: Fill("continue"); return;

      case NodeKind::kBoolOp: {
        Precedence p = node.op == Op::kAnd ? kAnd : kOr;
        std::string sep = node.op == Op::kAnd ? " and " : " or ";
        RequireParens(p, node, [&] {
          bool first = true;
          for (const NodePtr& value : node.list(field::kValues)) {
            if (!first) Write(sep);
            first = false;
            p = Next(p);
            SetPrecedence(p, value.get());
            Traverse(*value);
          }
        });
        return;
      }

      case NodeKind::kNamedExpr:
        RequireParens(kTuple, node, [&] {
          SetPrecedence(kAtom, node.child(field::kTarget));
          SetPrecedence(kAtom, node.child(field::kNamedValue));
          Traverse(node.child(field::kTarget));
          Write(" := ");
          Traverse(node.child(field::kNamedValue));
        });
        return;

      case NodeKind::kBinOp: {
        Precedence p = BinOpPrecedence(node.op);
        RequireParens(p, node, [&] {
          bool right_assoc = node.op == Op::kPow;
          Precedence left = right_assoc ? Next(p) : p;
          Precedence right = right_assoc ? p : Next(p);
          SetPrecedence(left, node.child(field::kLeft));
          Traverse(node.child(field::kLeft));
          Write(" ");
          Write(OpSymbol(node.op));
          Write(" ");
          SetPrecedence(right, node.child(field::kRight));
          Traverse(node.child(field::kRight));
        });
        return;
      }

      case NodeKind::kUnaryOp: {
        Precedence p = node.op == Op::kNot ? kNot : kFactor;
        RequireParens(p, node, [&] {
          Write(OpSymbol(node.op));
          if (p != kFactor) Write(" ");
          SetPrecedence(p, node.child(field::kOperand));
          Traverse(node.child(field::kOperand));
        });
        return;
      }

      case NodeKind::kLambda:
        RequireParens(kTest, node, [&] {
          Write("lambda ");
          Traverse(node.child(field::kLambdaArgs));
          Write(": ");
          SetPrecedence(kTest, node.child(field::kLambdaBody));
          Traverse(node.child(field::kLambdaBody));
        });
        return;

      case NodeKind::kIfExp:
        RequireParens(kTest, node, [&] {
          SetPrecedence(Next(kTest), node.child(field::kIfExpBody));
          SetPrecedence(Next(kTest), node.child(field::kIfExpTest));
          Traverse(node.child(field::kIfExpBody));
          Write(" if ");
          Traverse(node.child(field::kIfExpTest));
          Write(" else ");
          SetPrecedence(kTest, node.child(field::kIfExpOrelse));
          Traverse(node.child(field::kIfExpOrelse));
        });
        return;

      case NodeKind::kDict: {
        Write("{");
        const NodeList& keys = node.list(field::kKeys);
        const NodeList& values = node.list(field::kDictValues);
        for (std::size_t i = 0; i < values.size(); ++i) {
          if (i > 0) Write(", ");
          if (!keys[i]) {
            Write("**");
            SetPrecedence(kExpr, values[i].get());
            Traverse(*values[i]);
          } else {
            Traverse(*keys[i]);
            Write(": ");
            Traverse(*values[i]);
          }
        }
        Write("}");
        return;
      }

      case NodeKind::kSet:
        if (node.list(field::kElts).empty()) {
          Write("{*()}");
          return;
        }
        Write("{");
        CommaSeparated(node.list(field::kElts));
        Write("}");
        return;

      case NodeKind::kListComp:
      case NodeKind::kSetComp:
      case NodeKind::kGeneratorExp: {
        std::string_view open = node.kind == NodeKind::kListComp ? "["
                                : node.kind == NodeKind::kSetComp ? "{"
                                                                  : "(";
        std::string_view close = node.kind == NodeKind::kListComp ? "]"
                                 : node.kind == NodeKind::kSetComp ? "}"
                                                                   : ")";
        Write(open);
        Traverse(node.child(field::kElt));
        TraverseList(node.list(field::kGenerators));
        Write(close);
        return;
      }

      case NodeKind::kDictComp:
        Write("{");
        Traverse(node.child(field::kCompKey));
        Write(": ");
        Traverse(node.child(field::kCompValue));
        TraverseList(node.list(field::kDictCompGenerators));
        Write("}");
        return;

      case NodeKind::kComprehension:
        Write(node.flag ? " async for " : " for ");
        SetPrecedence(kTuple, node.child(field::kTarget));
        Traverse(node.child(field::kTarget));
        Write(" in ");
        SetPrecedence(Next(kTest), node.child(field::kCompIter));
        for (const NodePtr& cond : node.list(field::kCompIfs)) {
          SetPrecedence(Next(kTest), cond.get());
        }
        Traverse(node.child(field::kCompIter));
        for (const NodePtr& cond : node.list(field::kCompIfs)) {
          Write(" if ");
          Traverse(*cond);
        }
        return;

      case NodeKind::kAwait:
        RequireParens(kAwait, node, [&] {
          Write("await");
          if (const Node* value = node.child(field::kValue)) {
            Write(" ");
            SetPrecedence(kAtom, value);
            Traverse(*value);
          }
        });
        return;

      case NodeKind::kYield:
        RequireParens(kYield, node, [&] {
          Write("yield");
          if (const Node* value = node.child(field::kValue)) {
            Write(" ");
            SetPrecedence(kAtom, value);
            Traverse(*value);
          }
        });
        return;

      case NodeKind::kYieldFrom:
        RequireParens(kYield, node, [&] {
          Write("yield from ");
          SetPrecedence(kAtom, node.child(field::kValue));
          Traverse(node.child(field::kValue));
        });
        return;

      case NodeKind::kCompare:
        RequireParens(kCmp, node, [&] {
          SetPrecedence(Next(kCmp), node.child(field::kLeft));
          for (const NodePtr& c : node.list(field::kComparators)) {
            SetPrecedence(Next(kCmp), c.get());
          }
          Traverse(node.child(field::kLeft));
          const NodeList& comparators = node.list(field::kComparators);
          for (std::size_t i = 0; i < comparators.size(); ++i) {
            Write(" ");
            Write(OpSymbol(node.ops[i]));
            Write(" ");
            Traverse(*comparators[i]);
          }
        });
        return;

      case NodeKind::kCall: {
        SetPrecedence(kAtom, node.child(field::kFunc));
        Traverse(node.child(field::kFunc));
        Write("(");
        bool comma = false;
        for (int f : {field::kArgs, field::kKeywords}) {
          for (const NodePtr& e : node.list(f)) {
            if (comma) Write(", ");
            comma = true;
            Traverse(*e);
          }
        }
        Write(")");
        return;
      }

      case NodeKind::kFormattedValue: {
        Write("f");
        std::string buffer;
        FStringFormattedValue(node, buffer);
        WriteStrAvoidingBackslashes(buffer, kAllQuotes);
        return;
      }

      case NodeKind::kJoinedStr:
        VisitJoinedStr(node);
        return;

      case NodeKind::kConstant:
        if (node.constant.kind == Constant::Kind::kEllipsis) {
          Write("...");
          return;
        }
        if (node.constant.u_prefix) Write("u");
        WriteConstant(node.constant);
        return;

      case NodeKind::kAttribute: {
        const Node* value = node.child(field::kValue);
        SetPrecedence(kAtom, value);
        Traverse(*value);
        const Node& resolved = Resolve(*value);
        if (resolved.kind == NodeKind::kConstant &&
            (resolved.constant.kind == Constant::Kind::kInt ||
             resolved.constant.kind == Constant::Kind::kTrue ||
             resolved.constant.kind == Constant::Kind::kFalse)) {
          Write(" ");
        }
        Write(".");
        Write(node.name);
        return;
      }

      case NodeKind::kSubscript: {
        SetPrecedence(kAtom, node.child(field::kValue));
        Traverse(node.child(field::kValue));
        Write("[");
        const Node& slice = Resolve(*node.child(field::kSlice));
        bool simple_tuple = false;
        if (slice.kind == NodeKind::kTuple &&
            !slice.list(field::kElts).empty()) {
          simple_tuple = true;
          for (const NodePtr& elt : slice.list(field::kElts)) {
            if (Resolve(*elt).kind == NodeKind::kStarred) simple_tuple = false;
          }
        }
        if (simple_tuple) {
          ItemsView(slice.list(field::kElts));
        } else {
          Traverse(node.child(field::kSlice));
        }
        Write("]");
        return;
      }

      case NodeKind::kStarred:
        Write("*");
        SetPrecedence(kExpr, node.child(field::kValue));
        Traverse(node.child(field::kValue));
        return;

      case NodeKind::kName:
        Write(node.name);
        return;

      case NodeKind::kList:
        Write("[");
        CommaSeparated(node.list(field::kElts));
        Write("]");
        return;

      case NodeKind::kTuple:
        Write("(");
        ItemsView(node.list(field::kElts));
        Write(")");
        return;

      case NodeKind::kSlice:
        Traverse(node.child(field::kLower));
        Write(":");
        Traverse(node.child(field::kUpper));
        if (const Node* step = node.child(field::kStep)) {
          Write(":");
          Traverse(*step);
        }
        return;

      case NodeKind::kArguments:
        VisitArguments(node);
        return;

      case NodeKind::kArg:
        Write(node.name);
        if (const Node* ann = node.child(field::kArgAnnotation)) {
          Write(": ");
          Traverse(*ann);
        }
        return;

      case NodeKind::kKeyword:
        if (node.name.empty()) {
          Write("**");
        } else {
          Write(node.name);
          Write("=");
        }
        Traverse(node.child(field::kValue));
        return;

      case NodeKind::kAlias:
        Write(node.name);
        if (!node.asname.empty()) {
          Write(" as ");
          Write(node.asname);
        }
        return;

      case NodeKind::kWithItem:
        Traverse(node.child(field::kContextExpr));
        if (const Node* vars = node.child(field::kOptionalVars)) {
          Write(" as ");
          Traverse(*vars);
        }
        return;
    }
  }

  bool avoid_backslashes_;
  const Node* target_;
  const Node* replacement_;
  std::string source_;
  bool wrote_ = false;
  int indent_ = 0;
  std::unordered_map<const Node*, Precedence> precedences_;
};

}  // namespace

std::string Unparse(const Node& node) {
  return Unparser(false, nullptr, nullptr).Visit(node);
}

std::string UnparseWithSubstitution(const Node& root, const Node* target,
                                    const Node& replacement) {
  return Unparser(false, target, &replacement).Visit(root);
}

}  // namespace mist::py
