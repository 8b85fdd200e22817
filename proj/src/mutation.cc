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

#include "mist/mutation.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <utility>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mist/errors.h"
#include "mist/python/literals.h"
#include "mist/python/parser.h"
#include "mist/python/unparse.h"

namespace mist {

using py::Constant;
using py::Node;
using py::NodeKind;
using py::NodePtr;
using py::Op;

SourceUnit ParseSource(std::string text) {
  NodePtr tree = py::Parse(text);
  return SourceUnit{std::move(text), std::shared_ptr<const Node>(std::move(tree))};
}

std::string_view CategoryName(Category category) {
  switch (category) {
    case Category::kAOR: return "AOR";
    case Category::kROR: return "ROR";
    case Category::kLCR: return "LCR";
    case Category::kASR: return "ASR";
    case Category::kCRP: return "CRP";
    case Category::kUOI: return "UOI";
  }
  return "?";
}

Category ParseCategory(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(c));
  for (Category c : kAllCategories) {
    if (CategoryName(c) == upper) return c;
  }
  throw DomainError(fmt::format("unknown mutation category '{}'", name));
}

namespace {

std::vector<Op> AorTargets(Op op) {
  switch (op) {
    case Op::kAdd: return {Op::kSub, Op::kMult};
    case Op::kSub: return {Op::kAdd, Op::kMult};
    case Op::kMult: return {Op::kDiv, Op::kAdd, Op::kPow};
    case Op::kDiv: return {Op::kMult, Op::kFloorDiv};
    case Op::kMod: return {Op::kMult, Op::kAdd};
    default: return {};
  }
}

std::vector<Op> RorTargets(Op op) {
  switch (op) {
    case Op::kEq: return {Op::kNotEq};
    case Op::kLt: return {Op::kLtE, Op::kGtE, Op::kNotEq};
    case Op::kGt: return {Op::kGtE, Op::kLtE, Op::kNotEq};
    case Op::kLtE: return {Op::kLt, Op::kGt, Op::kNotEq};
    case Op::kGtE: return {Op::kGt, Op::kLt, Op::kNotEq};
    case Op::kIs: return {Op::kIsNot};
    case Op::kIn: return {Op::kNotIn};
    default: return {};
  }
}

std::vector<Op> AsrTargets(Op op) {
  switch (op) {
    case Op::kAdd: return {Op::kSub};
    case Op::kMult: return {Op::kDiv};
    default: return {};
  }
}

NodePtr MakeConstant(Constant value) {
  NodePtr node = py::MakeNode(NodeKind::kConstant);
  node->constant = std::move(value);
  return node;
}

NodePtr Negated(NodePtr operand) {
  NodePtr node = py::MakeNode(NodeKind::kUnaryOp);
  node->op = Op::kUSub;
  node->fields[py::field::kOperand].push_back(std::move(operand));
  return node;
}

// Signed number as a node: negative values become USub(|v|), which is how
// the parser would read them back.
NodePtr IntNode(std::string decimal) {
  bool negative = !decimal.empty() && decimal[0] == '-';
  Constant c;
  c.kind = Constant::Kind::kInt;
  c.text = negative ? decimal.substr(1) : decimal;
  NodePtr node = MakeConstant(std::move(c));
  return negative ? Negated(std::move(node)) : std::move(node);
}

NodePtr FloatNode(double value) {
  Constant c;
  c.kind = Constant::Kind::kFloat;
  c.number = std::fabs(value);
  NodePtr node = MakeConstant(std::move(c));
  return std::signbit(value) ? Negated(std::move(node)) : std::move(node);
}

std::vector<NodePtr> CrpReplacements(const Constant& c) {
  std::vector<NodePtr> out;
  switch (c.kind) {
    case Constant::Kind::kTrue:
    case Constant::Kind::kFalse: {
      Constant flipped;
      flipped.kind = c.kind == Constant::Kind::kTrue ? Constant::Kind::kFalse
                                                     : Constant::Kind::kTrue;
      out.push_back(MakeConstant(flipped));
      break;
    }
    case Constant::Kind::kInt:
      out.push_back(IntNode(py::AddToDecimal(c.text, 1)));
      out.push_back(IntNode(py::AddToDecimal(c.text, -1)));
      out.push_back(IntNode(c.text == "0" ? "0" : "-" + c.text));
      out.push_back(IntNode("0"));
      out.push_back(IntNode("1"));
      break;
    case Constant::Kind::kFloat:
      out.push_back(FloatNode(c.number + 1.0));
      out.push_back(FloatNode(c.number - 1.0));
      out.push_back(c.number == 0.0 ? FloatNode(0.0) : FloatNode(-c.number));
      out.push_back(FloatNode(0.0));
      out.push_back(FloatNode(1.0));
      break;
    case Constant::Kind::kStr: {
      Constant empty;
      empty.kind = Constant::Kind::kStr;
      Constant marker = empty;
      marker.text = "MUTATED";
      out.push_back(MakeConstant(empty));
      out.push_back(MakeConstant(marker));
      break;
    }
    default:
      break;
  }
  return out;
}

bool IsControlFlow(NodeKind kind) {
  switch (kind) {
    case NodeKind::kIf:
    case NodeKind::kFor:
    case NodeKind::kAsyncFor:
    case NodeKind::kWhile:
    case NodeKind::kTry:
      return true;
    default:
      return false;
  }
}

// True for the children that a control-flow statement evaluates before
// entering its body (the if/while test, the for target and iterable).
bool InHeader(const Node& parent, const Node* child) {
  switch (parent.kind) {
    case NodeKind::kIf:
    case NodeKind::kWhile:
      return parent.child(py::field::kTest) == child;
    case NodeKind::kFor:
    case NodeKind::kAsyncFor:
      return parent.child(py::field::kTarget) == child ||
             parent.child(py::field::kForIter) == child;
    default:
      return false;
  }
}

int ChildDepth(const Node& parent, const Node* child, int depth) {
  return IsControlFlow(parent.kind) && !InHeader(parent, child) ? depth + 1
                                                                 : depth;
}

struct Enumerator {
  const std::set<Category>& categories;
  std::vector<Candidate> out;
  // Control-flow nesting of each emitted candidate, parallel to `out`.
  std::vector<int> depths;

  bool Wants(Category c) const { return categories.count(c) > 0; }

  void Emit(Category category, const Node& site, NodePtr replacement,
            const std::string& path, int variant, int depth) {
    out.push_back(
        Candidate{category, &site, std::move(replacement), path, variant});
    depths.push_back(depth);
  }

  // `constant_ok` is false for docstrings and f-string literal parts.
  void Visit(const Node& node, const std::string& path, int depth,
             bool constant_ok, bool docstring_stmt) {
    switch (node.kind) {
      case NodeKind::kBinOp:
        if (Wants(Category::kAOR)) {
          int variant = 0;
          for (Op op : AorTargets(node.op)) {
            NodePtr r = py::Clone(node);
            r->op = op;
            Emit(Category::kAOR, node, std::move(r), path, variant++, depth);
          }
        }
        break;
      case NodeKind::kCompare:
        if (Wants(Category::kROR)) {
          int variant = 0;
          for (std::size_t i = 0; i < node.ops.size(); ++i) {
            for (Op op : RorTargets(node.ops[i])) {
              NodePtr r = py::Clone(node);
              r->ops[i] = op;
              Emit(Category::kROR, node, std::move(r), path, variant++, depth);
            }
          }
        }
        break;
      case NodeKind::kBoolOp:
        if (Wants(Category::kLCR)) {
          NodePtr r = py::Clone(node);
          r->op = node.op == Op::kAnd ? Op::kOr : Op::kAnd;
          Emit(Category::kLCR, node, std::move(r), path, 0, depth);
        }
        break;
      case NodeKind::kAugAssign:
        if (Wants(Category::kASR)) {
          int variant = 0;
          for (Op op : AsrTargets(node.op)) {
            NodePtr r = py::Clone(node);
            r->op = op;
            Emit(Category::kASR, node, std::move(r), path, variant++, depth);
          }
        }
        break;
      case NodeKind::kConstant:
        if (Wants(Category::kCRP) && constant_ok) {
          std::vector<NodePtr> seen;
          int variant = 0;
          for (NodePtr& r : CrpReplacements(node.constant)) {
            bool duplicate =
                std::any_of(seen.begin(), seen.end(), [&](const NodePtr& s) {
                  return py::StructurallyEqual(*s, *r);
                });
            if (!duplicate) {
              seen.push_back(py::Clone(*r));
              Emit(Category::kCRP, node, std::move(r), path, variant, depth);
            }
            ++variant;
          }
        }
        break;
      case NodeKind::kUnaryOp:
        if (Wants(Category::kUOI) &&
            (node.op == Op::kUSub || node.op == Op::kUAdd)) {
          NodePtr r = py::Clone(node);
          r->op = node.op == Op::kUSub ? Op::kUAdd : Op::kUSub;
          Emit(Category::kUOI, node, std::move(r), path, 0, depth);
        }
        break;
      default:
        break;
    }

    const Node* docstring = py::Docstring(node);
    bool child_constant_ok =
        node.kind != NodeKind::kJoinedStr && !docstring_stmt;
    int index = 0;
    for (const Node* child : py::SourceOrderChildren(node)) {
      std::string child_path = path.empty()
                                   ? std::to_string(index)
                                   : fmt::format("{}.{}", path, index);
      ++index;
      Visit(*child, child_path, ChildDepth(node, child, depth),
            child_constant_ok,
            child == docstring);
    }
  }
};

bool IsNumericZero(const Node& node) {
  if (node.kind != NodeKind::kConstant) return false;
  const Constant& c = node.constant;
  if (c.kind == Constant::Kind::kInt) return c.text == "0";
  if (c.kind == Constant::Kind::kFloat) return c.number == 0.0;
  return false;
}

}  // namespace

bool PassesEquivalenceHeuristics(const Node& original, const Node& mutated) {
  if (original.kind == NodeKind::kConstant) {
    if (mutated.kind == NodeKind::kConstant) {
      return !(original.constant == mutated.constant);
    }
    if (mutated.kind == NodeKind::kUnaryOp && mutated.op == Op::kUSub) {
      const Node* operand = mutated.child(py::field::kOperand);
      if (operand && IsNumericZero(original) && IsNumericZero(*operand)) {
        return false;
      }
    }
  }
  if (original.kind == NodeKind::kUnaryOp &&
      mutated.kind == NodeKind::kUnaryOp && original.op != mutated.op) {
    bool sign_flip = (original.op == Op::kUSub || original.op == Op::kUAdd) &&
                     (mutated.op == Op::kUSub || mutated.op == Op::kUAdd);
    const Node* operand = original.child(py::field::kOperand);
    if (sign_flip && operand && IsNumericZero(*operand)) return false;
  }
  return !py::StructurallyEqual(original, mutated);
}

namespace {

struct Enumeration {
  std::vector<Candidate> candidates;
  std::vector<int> depths;
};

Enumeration Enumerate(const SourceUnit& unit,
                      const std::set<Category>& categories) {
  Enumerator e{categories, {}, {}};
  e.Visit(*unit.tree, "", 0, true, false);
  return {std::move(e.out), std::move(e.depths)};
}

std::uint32_t Fnv1a(std::string_view text) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : text) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

bool FindDepth(const Node& at, const Node* target, int depth, int& found) {
  if (&at == target) {
    found = depth;
    return true;
  }
  for (const Node* child : py::SourceOrderChildren(at)) {
    if (FindDepth(*child, target, ChildDepth(at, child, depth), found)) {
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Candidate> EnumerateCandidates(
    const SourceUnit& unit, const std::set<Category>& categories) {
  return Enumerate(unit, categories).candidates;
}

std::vector<Mutant> GenerateMutants(const SourceUnit& unit,
                                    const MutationOptions& options) {
  Enumeration e = Enumerate(unit, options.categories);
  std::string hash = fmt::format("{:08x}", Fnv1a(unit.text));
  std::vector<Mutant> mutants;
  for (std::size_t i = 0; i < e.candidates.size(); ++i) {
    if (options.limit && mutants.size() >= *options.limit) break;
    const Candidate& c = e.candidates[i];
    if (!PassesEquivalenceHeuristics(*c.site, *c.replacement)) continue;

    std::string source;
    NodePtr reparsed;
    try {
      source = py::UnparseWithSubstitution(*unit.tree, c.site, *c.replacement);
      source += '\n';
      reparsed = py::Parse(source);
    } catch (const DomainError&) {
      continue;  // stillborn
    }
    if (py::StructurallyEqual(*unit.tree, *reparsed) ||
        py::CountDifferences(*unit.tree, *reparsed) != 1) {
      continue;
    }

    Mutant m;
    m.id = fmt::format("{}-{}-{}-{}", hash, CategoryName(c.category), c.path,
                       c.variant);
    m.category = c.category;
    m.original_line = std::max(1, c.site->span.line);
    m.mutated_line = MapMutantLine(unit.text, source, m.original_line);
    m.original_fragment = py::Unparse(*c.site);
    m.mutated_fragment = py::Unparse(*c.replacement);
    m.mutated_source = std::move(source);
    m.weight = options.weighted ? 1.0 + options.lambda * e.depths[i] : 1.0;
    mutants.push_back(std::move(m));
  }
  return mutants;
}

double AssignDifficultyWeight(const SourceUnit& unit, const Node& node,
                              bool weighted, double lambda) {
  int depth = 0;
  if (!FindDepth(*unit.tree, &node, 0, depth)) {
    throw DomainError("node is not part of the source unit");
  }
  return weighted ? 1.0 + lambda * depth : 1.0;
}

std::string MutantsToJson(const std::vector<Mutant>& mutants) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const Mutant& m : mutants) {
    out.push_back({{"id", m.id},
                   {"category", CategoryName(m.category)},
                   {"original_line", m.original_line},
                   {"mutated_line", m.mutated_line},
                   {"original_fragment", m.original_fragment},
                   {"mutated_fragment", m.mutated_fragment},
                   {"weight", m.weight},
                   {"mutated_source", m.mutated_source}});
  }
  return out.dump(2) + "\n";
}

std::vector<Mutant> MutantsFromJson(std::string_view json) {
  std::vector<Mutant> mutants;
  try {
    nlohmann::json doc = nlohmann::json::parse(json);
    if (!doc.is_array()) throw DomainError("mutant manifest must be an array");
    for (const auto& entry : doc) {
      Mutant m;
      m.id = entry.at("id").get<std::string>();
      m.category = ParseCategory(entry.at("category").get<std::string>());
      m.original_line = entry.at("original_line").get<int>();
      m.mutated_line = entry.at("mutated_line").get<int>();
      m.original_fragment = entry.at("original_fragment").get<std::string>();
      m.mutated_fragment = entry.at("mutated_fragment").get<std::string>();
      m.weight = entry.value("weight", 1.0);
      m.mutated_source = entry.at("mutated_source").get<std::string>();
      if (m.weight < 0) throw DomainError("mutant weight must be nonnegative");
      mutants.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(fmt::format("malformed mutant manifest: {}", e.what()));
  }
  return mutants;
}

}  // namespace mist
