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

// Syntax tree for the Python 3.10 subset handled by the mutation engine.
//
// The node set mirrors CPython's `ast` module. Every node has the same shape:
// scalar attributes (operator, identifier, literal value) plus an ordered
// list of child fields, each of which is a list of nodes. Single-valued
// fields hold zero or one element; a few list fields (Dict keys, kw_defaults)
// may hold null entries, exactly like their CPython counterparts. The uniform
// shape keeps traversal, structural comparison and tree diffing generic.

#ifndef MIST_PYTHON_AST_H_
#define MIST_PYTHON_AST_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace mist::py {

enum class NodeKind : std::uint8_t {
  kModule,
  // Statements.
  kFunctionDef,
  kAsyncFunctionDef,
  kClassDef,
  kReturn,
  kDelete,
  kAssign,
  kAugAssign,
  kAnnAssign,
  kFor,
  kAsyncFor,
  kWhile,
  kIf,
  kWith,
  kAsyncWith,
  kRaise,
  kTry,
  kAssert,
  kImport,
  kImportFrom,
  kGlobal,
  kNonlocal,
  kExpr,
  kPass,
  kBreak,
  kContinue,
  // Expressions.
  kBoolOp,
  kNamedExpr,
  kBinOp,
  kUnaryOp,
  kLambda,
  kIfExp,
  kDict,
  kSet,
  kListComp,
  kSetComp,
  kDictComp,
  kGeneratorExp,
  kAwait,
  kYield,
  kYieldFrom,
  kCompare,
  kCall,
  kFormattedValue,
  kJoinedStr,
  kConstant,
  kAttribute,
  kSubscript,
  kStarred,
  kName,
  kList,
  kTuple,
  kSlice,
  // Auxiliary nodes.
  kArguments,
  kArg,
  kKeyword,
  kAlias,
  kWithItem,
  kExceptHandler,
  kComprehension,
};

enum class Op : std::uint8_t {
  kNone,
  // Binary.
  kAdd,
  kSub,
  kMult,
  kMatMult,
  kDiv,
  kMod,
  kPow,
  kLShift,
  kRShift,
  kBitOr,
  kBitXor,
  kBitAnd,
  kFloorDiv,
  // Boolean.
  kAnd,
  kOr,
  // Unary.
  kInvert,
  kNot,
  kUAdd,
  kUSub,
  // Comparison.
  kEq,
  kNotEq,
  kLt,
  kLtE,
  kGt,
  kGtE,
  kIs,
  kIsNot,
  kIn,
  kNotIn,
};

std::string_view NodeKindName(NodeKind kind);
// CPython class name of the operator ("Add", "LtE", ...).
std::string_view OpName(Op op);
// Surface syntax of the operator ("+", "<=", "not in", ...).
std::string_view OpSymbol(Op op);

bool IsStatement(NodeKind kind);
bool IsExpression(NodeKind kind);

struct Constant {
  enum class Kind : std::uint8_t {
    kNone,
    kTrue,
    kFalse,
    kEllipsis,
    kInt,
    kFloat,
    kComplex,
    kStr,
    kBytes,
  };

  Kind kind = Kind::kNone;
  // kInt: canonical decimal digits (no sign). kStr: UTF-8 value.
  // kBytes: raw byte value.
  std::string text;
  // kFloat value, or the imaginary part for kComplex.
  double number = 0.0;
  // Cosmetic `u"..."` prefix; ignored by equality.
  bool u_prefix = false;

  bool IsNumber() const {
    return kind == Kind::kInt || kind == Kind::kFloat ||
           kind == Kind::kComplex;
  }
  bool IsString() const { return kind == Kind::kStr; }

  friend bool operator==(const Constant& a, const Constant& b);
};

// 1-based lines, 0-based UTF-8 byte columns (CPython convention). The end
// position is exclusive.
struct Span {
  int line = 0;
  int col = 0;
  int end_line = 0;
  int end_col = 0;
};

struct Node;
using NodePtr = std::unique_ptr<Node>;
using NodeList = std::vector<NodePtr>;

struct Node {
  explicit Node(NodeKind k);

  NodeKind kind;
  Span span;
  // BinOp, UnaryOp, BoolOp and AugAssign operator.
  Op op = Op::kNone;
  // Compare operators, one per comparator.
  std::vector<Op> ops;
  // Identifier payload: Name.id, Attribute.attr, def/class name, arg name,
  // keyword name (empty for `**`), alias name, except-handler name,
  // ImportFrom module.
  std::string name;
  // alias.asname.
  std::string asname;
  // Global / Nonlocal names.
  std::vector<std::string> names;
  Constant constant;
  // Kind-specific integer: ImportFrom level, AnnAssign simple,
  // comprehension is_async, FormattedValue conversion (-1 or a char code).
  int flag = 0;
  // Parse-time only: the expression was written inside parentheses.
  bool parenthesized = false;
  std::vector<NodeList> fields;

  const Node* child(int field) const {
    const auto& f = fields[field];
    return f.empty() ? nullptr : f.front().get();
  }
  Node* child(int field) {
    auto& f = fields[field];
    return f.empty() ? nullptr : f.front().get();
  }
  const NodeList& list(int field) const { return fields[field]; }
  NodeList& list(int field) { return fields[field]; }
};

NodePtr MakeNode(NodeKind kind);
NodePtr Clone(const Node& node);

// Structural equality: kinds, scalar attributes and children, ignoring
// positions and parenthesization.
bool StructurallyEqual(const Node& a, const Node& b);

// Number of positions at which the trees differ. Descent stops at the first
// difference on each path, so replacing one subtree counts as one.
int CountDifferences(const Node& a, const Node& b);

// Non-null children ordered by source position (stable within ties).
std::vector<const Node*> SourceOrderChildren(const Node& node);

// Returns the docstring expression statement of a module/def/class body,
// or nullptr.
const Node* Docstring(const Node& node);

// Compact s-expression dump, for diagnostics and golden tests.
std::string Dump(const Node& node);

// Field indices. Every kind has a fixed field layout.
namespace field {
// Module
inline constexpr int kBody = 0;
// FunctionDef / AsyncFunctionDef / ClassDef
inline constexpr int kDecorators = 0;
inline constexpr int kDefArgs = 1;
inline constexpr int kDefReturns = 2;
inline constexpr int kDefBody = 3;
inline constexpr int kClassBases = 1;
inline constexpr int kClassKeywords = 2;
inline constexpr int kClassBody = 3;
// Return / Expr / Await / Yield / YieldFrom / Starred / Attribute /
// Keyword value
inline constexpr int kValue = 0;
// Delete / Assign targets
inline constexpr int kTargets = 0;
inline constexpr int kAssignValue = 1;
// AugAssign / AnnAssign / For / NamedExpr / Comprehension
inline constexpr int kTarget = 0;
inline constexpr int kAugValue = 1;
inline constexpr int kAnnotation = 1;
inline constexpr int kAnnValue = 2;
inline constexpr int kNamedValue = 1;
inline constexpr int kForIter = 1;
inline constexpr int kForBody = 2;
inline constexpr int kForOrelse = 3;
// While / If
inline constexpr int kTest = 0;
inline constexpr int kCondBody = 1;
inline constexpr int kCondOrelse = 2;
// With / AsyncWith
inline constexpr int kWithItems = 0;
inline constexpr int kWithBody = 1;
// Raise
inline constexpr int kExc = 0;
inline constexpr int kCause = 1;
// Try
inline constexpr int kTryBody = 0;
inline constexpr int kHandlers = 1;
inline constexpr int kTryOrelse = 2;
inline constexpr int kFinalbody = 3;
// Assert
inline constexpr int kAssertTest = 0;
inline constexpr int kAssertMsg = 1;
// Import / ImportFrom
inline constexpr int kAliases = 0;
// BoolOp
inline constexpr int kValues = 0;
// BinOp
inline constexpr int kLeft = 0;
inline constexpr int kRight = 1;
// UnaryOp
inline constexpr int kOperand = 0;
// Lambda
inline constexpr int kLambdaArgs = 0;
inline constexpr int kLambdaBody = 1;
// IfExp (source order)
inline constexpr int kIfExpBody = 0;
inline constexpr int kIfExpTest = 1;
inline constexpr int kIfExpOrelse = 2;
// Dict
inline constexpr int kKeys = 0;
inline constexpr int kDictValues = 1;
// Set / List / Tuple
inline constexpr int kElts = 0;
// ListComp / SetComp / GeneratorExp
inline constexpr int kElt = 0;
inline constexpr int kGenerators = 1;
// DictComp
inline constexpr int kCompKey = 0;
inline constexpr int kCompValue = 1;
inline constexpr int kDictCompGenerators = 2;
// Comprehension
inline constexpr int kCompIter = 1;
inline constexpr int kCompIfs = 2;
// Compare
inline constexpr int kComparators = 1;
// Call
inline constexpr int kFunc = 0;
inline constexpr int kArgs = 1;
inline constexpr int kKeywords = 2;
// FormattedValue
inline constexpr int kFormatSpec = 1;
// JoinedStr: kValues
// Subscript
inline constexpr int kSlice = 1;
// Slice
inline constexpr int kLower = 0;
inline constexpr int kUpper = 1;
inline constexpr int kStep = 2;
// Arguments
inline constexpr int kPosonlyArgs = 0;
inline constexpr int kPosArgs = 1;
inline constexpr int kVararg = 2;
inline constexpr int kKwonlyArgs = 3;
inline constexpr int kKwDefaults = 4;
inline constexpr int kKwarg = 5;
inline constexpr int kDefaults = 6;
// Arg
inline constexpr int kArgAnnotation = 0;
// WithItem
inline constexpr int kContextExpr = 0;
inline constexpr int kOptionalVars = 1;
// ExceptHandler
inline constexpr int kHandlerType = 0;
inline constexpr int kHandlerBody = 1;
}  // namespace field

}  // namespace mist::py

#endif  // MIST_PYTHON_AST_H_
