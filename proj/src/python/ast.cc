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

#include "mist/python/ast.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mist/python/literals.h"

namespace mist::py {
namespace {

int FieldCount(NodeKind kind) {
  switch (kind) {
    case NodeKind::kGlobal:
    case NodeKind::kNonlocal:
    case NodeKind::kPass:
    case NodeKind::kBreak:
    case NodeKind::kContinue:
    case NodeKind::kConstant:
    case NodeKind::kName:
    case NodeKind::kAlias:
      return 0;
    case NodeKind::kModule:
    case NodeKind::kReturn:
    case NodeKind::kDelete:
    case NodeKind::kImport:
    case NodeKind::kImportFrom:
    case NodeKind::kExpr:
    case NodeKind::kBoolOp:
    case NodeKind::kUnaryOp:
    case NodeKind::kSet:
    case NodeKind::kAwait:
    case NodeKind::kYield:
    case NodeKind::kYieldFrom:
    case NodeKind::kJoinedStr:
    case NodeKind::kAttribute:
    case NodeKind::kStarred:
    case NodeKind::kList:
    case NodeKind::kTuple:
    case NodeKind::kArg:
    case NodeKind::kKeyword:
      return 1;
    case NodeKind::kAssign:
    case NodeKind::kAugAssign:
    case NodeKind::kWith:
    case NodeKind::kAsyncWith:
    case NodeKind::kRaise:
    case NodeKind::kAssert:
    case NodeKind::kNamedExpr:
    case NodeKind::kBinOp:
    case NodeKind::kLambda:
    case NodeKind::kDict:
    case NodeKind::kListComp:
    case NodeKind::kSetComp:
    case NodeKind::kGeneratorExp:
    case NodeKind::kCompare:
    case NodeKind::kFormattedValue:
    case NodeKind::kSubscript:
    case NodeKind::kWithItem:
    case NodeKind::kExceptHandler:
      return 2;
    case NodeKind::kAnnAssign:
    case NodeKind::kWhile:
    case NodeKind::kIf:
    case NodeKind::kIfExp:
    case NodeKind::kDictComp:
    case NodeKind::kCall:
    case NodeKind::kSlice:
    case NodeKind::kComprehension:
      return 3;
    case NodeKind::kFunctionDef:
    case NodeKind::kAsyncFunctionDef:
    case NodeKind::kClassDef:
    case NodeKind::kFor:
    case NodeKind::kAsyncFor:
    case NodeKind::kTry:
      return 4;
    case NodeKind::kArguments:
      return 7;
  }
  return 0;
}

bool SameAttributes(const Node& a, const Node& b) {
  return a.kind == b.kind && a.op == b.op && a.ops == b.ops &&
         a.name == b.name && a.asname == b.asname && a.names == b.names &&
         a.constant == b.constant && a.flag == b.flag &&
         a.fields.size() == b.fields.size();
}

bool SameShape(const Node& a, const Node& b) {
  for (std::size_t f = 0; f < a.fields.size(); ++f) {
    const NodeList& la = a.fields[f];
    const NodeList& lb = b.fields[f];
    if (la.size() != lb.size()) return false;
    for (std::size_t i = 0; i < la.size(); ++i) {
      if ((la[i] == nullptr) != (lb[i] == nullptr)) return false;
    }
  }
  return true;
}

void DumpInto(const Node& node, std::ostringstream& out) {
  out << '(' << NodeKindName(node.kind);
  if (node.op != Op::kNone) out << ' ' << OpName(node.op);
  for (Op op : node.ops) out << ' ' << OpName(op);
  if (!node.name.empty()) out << " name=" << node.name;
  if (!node.asname.empty()) out << " as=" << node.asname;
  for (const auto& n : node.names) out << ' ' << n;
  if (node.kind == NodeKind::kConstant) out << ' ' << ConstantRepr(node.constant);
  if (node.kind == NodeKind::kImportFrom || node.kind == NodeKind::kAnnAssign ||
      node.kind == NodeKind::kComprehension ||
      node.kind == NodeKind::kFormattedValue) {
    out << " flag=" << node.flag;
  }
  for (const NodeList& list : node.fields) {
    out << " [";
    bool first = true;
    for (const NodePtr& child : list) {
      if (!first) out << ' ';
      first = false;
      if (child) {
        DumpInto(*child, out);
      } else {
        out << "null";
      }
    }
    out << ']';
  }
  out << ')';
}

}  // namespace

bool operator==(const Constant& a, const Constant& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Constant::Kind::kInt:
    case Constant::Kind::kStr:
    case Constant::Kind::kBytes:
      return a.text == b.text;
    case Constant::Kind::kFloat:
    case Constant::Kind::kComplex:
      return a.number == b.number ||
             (std::isnan(a.number) && std::isnan(b.number));
    default:
      return true;
  }
}

std::string_view NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kModule: return "Module";
    case NodeKind::kFunctionDef: return "FunctionDef";
    case NodeKind::kAsyncFunctionDef: return "AsyncFunctionDef";
    case NodeKind::kClassDef: return "ClassDef";
    case NodeKind::kReturn: return "Return";
    case NodeKind::kDelete: return "Delete";
    case NodeKind::kAssign: return "Assign";
    case NodeKind::kAugAssign: return "AugAssign";
    case NodeKind::kAnnAssign: return "AnnAssign";
    case NodeKind::kFor: return "For";
    case NodeKind::kAsyncFor: return "AsyncFor";
    case NodeKind::kWhile: return "While";
    case NodeKind::kIf: return "If";
    case NodeKind::kWith: return "With";
    case NodeKind::kAsyncWith: return "AsyncWith";
    case NodeKind::kRaise: return "Raise";
    case NodeKind::kTry: return "Try";
    case NodeKind::kAssert: return "Assert";
    case NodeKind::kImport: return "Import";
    case NodeKind::kImportFrom: return "ImportFrom";
    case NodeKind::kGlobal: return "Global";
    case NodeKind::kNonlocal: return "Nonlocal";
    case NodeKind::kExpr: return "Expr";
    case NodeKind::kPass: return "Pass";
    case NodeKind::kBreak: return "Break";
    case NodeKind::kContinue: return "Continue";
    case NodeKind::kBoolOp: return "BoolOp";
    case NodeKind::kNamedExpr: return "NamedExpr";
    case NodeKind::kBinOp: return "BinOp";
    case NodeKind::kUnaryOp: return "UnaryOp";
    case NodeKind::kLambda: return "Lambda";
    case NodeKind::kIfExp: return "IfExp";
    case NodeKind::kDict: return "Dict";
    case NodeKind::kSet: return "Set";
    case NodeKind::kListComp: return "ListComp";
    case NodeKind::kSetComp: return "SetComp";
    case NodeKind::kDictComp: return "DictComp";
    case NodeKind::kGeneratorExp: return "GeneratorExp";
    case NodeKind::kAwait: return "Await";
    case NodeKind::kYield: return "Yield";
    case NodeKind::kYieldFrom: return "YieldFrom";
    case NodeKind::kCompare: return "Compare";
    case NodeKind::kCall: return "Call";
    case NodeKind::kFormattedValue: return "FormattedValue";
    case NodeKind::kJoinedStr: return "JoinedStr";
    case NodeKind::kConstant: return "Constant";
    case NodeKind::kAttribute: return "Attribute";
    case NodeKind::kSubscript: return "Subscript";
    case NodeKind::kStarred: return "Starred";
    case NodeKind::kName: return "Name";
    case NodeKind::kList: return "List";
    case NodeKind::kTuple: return "Tuple";
    case NodeKind::kSlice: return "Slice";
    case NodeKind::kArguments: return "arguments";
    case NodeKind::kArg: return "arg";
    case NodeKind::kKeyword: return "keyword";
    case NodeKind::kAlias: return "alias";
    case NodeKind::kWithItem: return "withitem";
    case NodeKind::kExceptHandler: return "ExceptHandler";
    case NodeKind::kComprehension: return "comprehension";
  }
  return "?";
}

std::string_view OpName(Op op) {
  switch (op) {
    case Op::kNone: return "None";
    case Op::kAdd: return "Add";
    case Op::kSub: return "Sub";
    case Op::kMult: return "Mult";
    case Op::kMatMult: return "MatMult";
    case Op::kDiv: return "Div";
    case Op::kMod: return "Mod";
    case Op::kPow: return "Pow";
    case Op::kLShift: return "LShift";
    case Op::kRShift: return "RShift";
    case Op::kBitOr: return "BitOr";
    case Op::kBitXor: return "BitXor";
    case Op::kBitAnd: return "BitAnd";
    case Op::kFloorDiv: return "FloorDiv";
    case Op::kAnd: return "And";
    case Op::kOr: return "Or";
    case Op::kInvert: return "Invert";
    case Op::kNot: return "Not";
    case Op::kUAdd: return "UAdd";
    case Op::kUSub: return "USub";
    case Op::kEq: return "Eq";
    case Op::kNotEq: return "NotEq";
    case Op::kLt: return "Lt";
    case Op::kLtE: return "LtE";
    case Op::kGt: return "Gt";
    case Op::kGtE: return "GtE";
    case Op::kIs: return "Is";
    case Op::kIsNot: return "IsNot";
    case Op::kIn: return "In";
    case Op::kNotIn: return "NotIn";
  }
  return "?";
}

std::string_view OpSymbol(Op op) {
  switch (op) {
    case Op::kNone: return "";
    case Op::kAdd: return "+";
    case Op::kSub: return "-";
    case Op::kMult: return "*";
    case Op::kMatMult: return "@";
    case Op::kDiv: return "/";
    case Op::kMod: return "%";
    case Op::kPow: return "**";
    case Op::kLShift: return "<<";
    case Op::kRShift: return ">>";
    case Op::kBitOr: return "|";
    case Op::kBitXor: return "^";
    case Op::kBitAnd: return "&";
    case Op::kFloorDiv: return "//";
    case Op::kAnd: return "and";
    case Op::kOr: return "or";
    case Op::kInvert: return "~";
    case Op::kNot: return "not";
    case Op::kUAdd: return "+";
    case Op::kUSub: return "-";
    case Op::kEq: return "==";
    case Op::kNotEq: return "!=";
    case Op::kLt: return "<";
    case Op::kLtE: return "<=";
    case Op::kGt: return ">";
    case Op::kGtE: return ">=";
    case Op::kIs: return "is";
    case Op::kIsNot: return "is not";
    case Op::kIn: return "in";
    case Op::kNotIn: return "not in";
  }
  return "";
}

bool IsStatement(NodeKind kind) {
  return kind >= NodeKind::kFunctionDef && kind <= NodeKind::kContinue;
}

bool IsExpression(NodeKind kind) {
  return kind >= NodeKind::kBoolOp && kind <= NodeKind::kSlice;
}

Node::Node(NodeKind k) : kind(k), fields(FieldCount(k)) {}

NodePtr MakeNode(NodeKind kind) { return std::make_unique<Node>(kind); }

NodePtr Clone(const Node& node) {
  auto copy = MakeNode(node.kind);
  copy->span = node.span;
  copy->op = node.op;
  copy->ops = node.ops;
  copy->name = node.name;
  copy->asname = node.asname;
  copy->names = node.names;
  copy->constant = node.constant;
  copy->flag = node.flag;
  copy->parenthesized = node.parenthesized;
  for (std::size_t f = 0; f < node.fields.size(); ++f) {
    for (const NodePtr& child : node.fields[f]) {
      copy->fields[f].push_back(child ? Clone(*child) : nullptr);
    }
  }
  return copy;
}

bool StructurallyEqual(const Node& a, const Node& b) {
  return CountDifferences(a, b) == 0;
}

int CountDifferences(const Node& a, const Node& b) {
  if (!SameAttributes(a, b) || !SameShape(a, b)) return 1;
  int count = 0;
  for (std::size_t f = 0; f < a.fields.size(); ++f) {
    for (std::size_t i = 0; i < a.fields[f].size(); ++i) {
      const Node* ca = a.fields[f][i].get();
      const Node* cb = b.fields[f][i].get();
      if (ca != nullptr) count += CountDifferences(*ca, *cb);
    }
  }
  return count;
}

std::vector<const Node*> SourceOrderChildren(const Node& node) {
  std::vector<const Node*> children;
  for (const NodeList& list : node.fields) {
    for (const NodePtr& child : list) {
      if (child) children.push_back(child.get());
    }
  }
  std::stable_sort(children.begin(), children.end(),
                   [](const Node* a, const Node* b) {
                     if (a->span.line != b->span.line) {
                       return a->span.line < b->span.line;
                     }
                     return a->span.col < b->span.col;
                   });
  return children;
}

const Node* Docstring(const Node& node) {
  int body_field;
  switch (node.kind) {
    case NodeKind::kModule:
      body_field = field::kBody;
      break;
    case NodeKind::kFunctionDef:
    case NodeKind::kAsyncFunctionDef:
    case NodeKind::kClassDef:
      body_field = field::kDefBody;
      break;
    default:
      return nullptr;
  }
  const NodeList& body = node.list(body_field);
  if (body.empty() || body.front()->kind != NodeKind::kExpr) return nullptr;
  const Node* value = body.front()->child(field::kValue);
  if (value->kind != NodeKind::kConstant || !value->constant.IsString()) {
    return nullptr;
  }
  return body.front().get();
}

std::string Dump(const Node& node) {
  std::ostringstream out;
  DumpInto(node, out);
  return out.str();
}

}  // namespace mist::py
