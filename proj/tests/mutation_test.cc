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
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mist/errors.h"
#include "mist/python/parser.h"
#include "mist/python/unparse.h"
#include "operator_table.h"
#include "test_support.h"

namespace mist {
namespace {

TEST(GenerateMutantsTest, OperatorTableRows) {
  for (const Row& row : kTableRows) {
    EXPECT_EQ(Fragments(row.source, row.category), row.expected)
        << row.source;
  }
}

TEST(GenerateMutantsTest, OperatorsOutsideTheTableAreLeftAlone) {
  for (Category c : kAllCategories) {
    EXPECT_TRUE(Fragments("x = a // b ** c @ d << e\n", c).empty())
        << CategoryName(c);
  }
  EXPECT_TRUE(Fragments("x = a // b\n", Category::kAOR).empty());
  EXPECT_TRUE(Fragments("x = a != b\n", Category::kROR).empty());
  EXPECT_TRUE(Fragments("x -= 1\n", Category::kASR).empty());
  EXPECT_TRUE(Fragments("x = not y\n", Category::kUOI).empty());
  EXPECT_TRUE(Fragments("x = ~y\n", Category::kUOI).empty());
  EXPECT_TRUE(Fragments("x = None\n", Category::kCRP).empty());
  EXPECT_TRUE(Fragments("x = b'raw'\n", Category::kCRP).empty());
}

TEST(GenerateMutantsTest, PassBodyHasNoMutants) {
  EXPECT_TRUE(GenerateMutants(ParseSource("pass\n")).empty());
}

TEST(GenerateMutantsTest, ChainedComparisonMutatesEachOperator) {
  EXPECT_EQ(Fragments("x = a < b == c\n", Category::kROR),
            (std::multiset<std::string>{"a <= b == c", "a >= b == c",
                                        "a != b == c", "a < b != c"}));
}

TEST(GenerateMutantsTest, EquivalentConstantsAreFiltered) {
  EXPECT_EQ(Fragments("x = 0\n", Category::kCRP),
            (std::multiset<std::string>{"1", "-1"}));
  EXPECT_EQ(Fragments("x = 1\n", Category::kCRP),
            (std::multiset<std::string>{"2", "0", "-1"}));
  EXPECT_EQ(Fragments("x = ''\n", Category::kCRP),
            (std::multiset<std::string>{"'MUTATED'"}));
  EXPECT_TRUE(Fragments("x = -0\n", Category::kUOI).empty());
}

TEST(GenerateMutantsTest, DocstringsAndFStringLiteralsAreSkipped) {
  const std::string source =
      "'''Module.'''\n"
      "def f():\n"
      "    '''Doc.'''\n"
      "    return f'a{x}b'\n"
      "class C:\n"
      "    'Doc.'\n";
  EXPECT_TRUE(Fragments(source, Category::kCRP).empty());
}

TEST(GenerateMutantsTest, DefaultsAndAnnotationsAreMutated) {
  EXPECT_EQ(Fragments("def f(a=3): pass\n", Category::kCRP).size(), 5u);
}

TEST(GenerateMutantsTest, LimitKeepsTraversalPrefix) {
  SourceUnit unit = ParseSource("x = a + b\ny = c < d\n");
  std::vector<Mutant> all = GenerateMutants(unit);
  MutationOptions options;
  options.limit = 3;
  std::vector<Mutant> head = GenerateMutants(unit, options);
  ASSERT_EQ(head.size(), 3u);
  EXPECT_TRUE(std::equal(head.begin(), head.end(), all.begin()));
}

TEST(GenerateMutantsTest, DepthFirstSourceOrder) {
  std::vector<Mutant> mutants =
      GenerateMutants(ParseSource("x = a + 1\ny = b - 2\n"));
  std::vector<std::string> seen;
  for (const Mutant& m : mutants) seen.push_back(m.mutated_fragment);
  EXPECT_EQ(seen, (std::vector<std::string>{"a - 1", "a * 1", "2", "0", "-1",
                                            "b + 2", "b * 2", "3", "1", "-2",
                                            "0"}));
}

TEST(GenerateMutantsTest, CaseStudyContainsRangeBoundaryMutant) {
  SourceUnit unit = ParseSource(ReadFixture("move_one_ball.py"));
  MutationOptions options;
  options.categories = {Category::kCRP};
  std::vector<Mutant> mutants = GenerateMutants(unit, options);
  auto it = std::find_if(mutants.begin(), mutants.end(), [](const Mutant& m) {
    return m.mutated_source.find("range(2, len(arr))") != std::string::npos;
  });
  ASSERT_NE(it, mutants.end());
  EXPECT_EQ(it->original_fragment, "1");
  EXPECT_EQ(it->mutated_fragment, "2");
  EXPECT_EQ(it->original_line, 13);
  // Frozen from a difflib walk over the two texts.
  EXPECT_EQ(it->mutated_line, 13);
  EXPECT_EQ(LineOf(it->mutated_source, it->mutated_line),
            "    for i in range(2, len(arr)):");
}

TEST(GenerateMutantsTest, FirstOrderAndParseValid) {
  for (const char* name : {"move_one_ball.py", "sample_module.py"}) {
    SourceUnit unit = ParseSource(ReadFixture(name));
    MutationOptions options;
    options.weighted = true;
    for (const Mutant& m : GenerateMutants(unit, options)) {
      py::NodePtr tree = py::Parse(m.mutated_source);
      EXPECT_FALSE(py::StructurallyEqual(*unit.tree, *tree)) << m.id;
      EXPECT_EQ(py::CountDifferences(*unit.tree, *tree), 1) << m.id;
      EXPECT_GE(m.weight, 1.0);
      EXPECT_GE(m.mutated_line, 1);
    }
  }
}

TEST(GenerateMutantsTest, DeterministicAcrossCalls) {
  SourceUnit unit = ParseSource(ReadFixture("sample_module.py"));
  SourceUnit again = ParseSource(ReadFixture("sample_module.py"));
  EXPECT_EQ(GenerateMutants(unit), GenerateMutants(again));
  std::vector<Mutant> mutants = GenerateMutants(unit);
  std::set<std::string> ids;
  for (const Mutant& m : mutants) ids.insert(m.id);
  EXPECT_EQ(ids.size(), mutants.size());
}

TEST(EquivalenceHeuristicsTest, Examples) {
  py::NodePtr zero = py::Parse("0\n");
  py::NodePtr one = py::Parse("1\n");
  const py::Node& zero_c =
      *zero->list(py::field::kBody)[0]->child(py::field::kValue);
  const py::Node& one_c =
      *one->list(py::field::kBody)[0]->child(py::field::kValue);
  EXPECT_FALSE(PassesEquivalenceHeuristics(zero_c, zero_c));
  EXPECT_TRUE(PassesEquivalenceHeuristics(zero_c, one_c));

  py::NodePtr neg = py::Parse("-0\n");
  py::NodePtr pos = py::Parse("+0\n");
  EXPECT_FALSE(PassesEquivalenceHeuristics(
      *neg->list(py::field::kBody)[0]->child(py::field::kValue),
      *pos->list(py::field::kBody)[0]->child(py::field::kValue)));
  // CRP n -> -n on a literal zero.
  EXPECT_FALSE(PassesEquivalenceHeuristics(
      zero_c, *neg->list(py::field::kBody)[0]->child(py::field::kValue)));

  py::NodePtr lt = py::Parse("a < b\n");
  py::NodePtr le = py::Parse("a <= b\n");
  EXPECT_TRUE(PassesEquivalenceHeuristics(
      *lt->list(py::field::kBody)[0]->child(py::field::kValue),
      *le->list(py::field::kBody)[0]->child(py::field::kValue)));
}

TEST(EquivalenceHeuristicsTest, RejectedRewritesArePreservingOnSweep) {
  if (!PythonAvailable()) GTEST_SKIP() << "python3 not available";
  const std::string source =
      "def f(x, y):\n"
      "    if x > 0:\n"
      "        return x * 1 + -0\n"
      "    return y - 0 + 0.0 * x + +0 + (x if y else 0)\n";
  SourceUnit unit = ParseSource(source);
  int rejected = 0;
  for (const Candidate& c : EnumerateCandidates(
           unit, {std::begin(kAllCategories), std::end(kAllCategories)})) {
    if (PassesEquivalenceHeuristics(*c.site, *c.replacement)) continue;
    ++rejected;
    std::string mutated =
        py::UnparseWithSubstitution(*unit.tree, c.site, *c.replacement);
    std::string script =
        "def run(src):\n"
        "    ns = {}\n"
        "    exec(src, ns)\n"
        "    out = []\n"
        "    for x in [-3, -1, 0, 1, 2, 2.5, -0.0]:\n"
        "        for y in [-2, 0, 1, 3.5]:\n"
        "            out.append(ns['f'](x, y))\n"
        "    return out\n"
        "assert run(" + PyRepr(source) + ") == run(" + PyRepr(mutated) + ")\n";
    EXPECT_EQ(RunPython(script), 0) << mutated;
  }
  EXPECT_GE(rejected, 6);
}

TEST(MapMutantLineTest, IdentityDiff) {
  std::string text = ReadFixture("move_one_ball.py");
  for (int line = 1; line <= 16; ++line) {
    EXPECT_EQ(MapMutantLine(text, text, line), line);
  }
}

TEST(MapMutantLineTest, SameLineCountSwap) {
  std::string same, swap;
  for (int i = 1; i <= 15; ++i) {
    same += "v" + std::to_string(i) + " = " + std::to_string(i) + "\n";
    swap += "v" + std::to_string(i) + " = " + (i == 12 ? "-" : "") +
            std::to_string(i) + "\n";
  }
  EXPECT_EQ(MapMutantLine(same, swap, 12), 12);
}

TEST(MapMutantLineTest, DroppedBlankLineShiftsUp) {
  const std::string original =
      "def f(a, b):\n    x = a\n    y = b\n\n    z = x + y\n    w = z * 2\n"
      "    q = w - 1\n    r = q + x\n    return r + y\n    # tail\n";
  const std::string mutated =
      "def f(a, b):\n    x = a\n    y = b\n    z = x + y\n    w = z * 2\n"
      "    q = w - 1\n    r = q + x\n    return r - y\n";
  EXPECT_EQ(MapMutantLine(original, mutated, 9), 8);
  // Deleted trailing lines clamp to the end of the mutated text.
  EXPECT_EQ(MapMutantLine(original, mutated, 10), 8);
}

TEST(DifficultyWeightTest, NestingDepth) {
  SourceUnit unit = ParseSource(
      "total = 0\n"
      "if flag:\n"
      "    for i in xs:\n"
      "        total = total + i\n");
  const py::Node& top = *unit.tree->list(py::field::kBody)[0];
  const py::Node& branch = *unit.tree->list(py::field::kBody)[1];
  const py::Node& loop = *branch.list(py::field::kCondBody)[0];
  const py::Node& assign = *loop.list(py::field::kForBody)[0];
  const py::Node& sum = *assign.child(py::field::kAssignValue);
  EXPECT_DOUBLE_EQ(AssignDifficultyWeight(unit, top, false), 1.0);
  EXPECT_DOUBLE_EQ(AssignDifficultyWeight(unit, top, true), 1.0);
  EXPECT_DOUBLE_EQ(AssignDifficultyWeight(unit, sum, true, 0.25), 1.5);
  EXPECT_DOUBLE_EQ(AssignDifficultyWeight(unit, sum, false, 0.25), 1.0);
  // The loop's own header is not inside the loop.
  EXPECT_DOUBLE_EQ(
      AssignDifficultyWeight(unit, *loop.child(py::field::kForIter), true),
      1.25);
  py::NodePtr foreign = py::Parse("x = 1\n");
  EXPECT_THROW(AssignDifficultyWeight(unit, *foreign, true), DomainError);
}

TEST(ParseSourceTest, Examples) {
  SourceUnit unit = ParseSource("def f(x):\n    return x + 1\n");
  ASSERT_EQ(unit.tree->list(py::field::kBody).size(), 1u);
  EXPECT_EQ(unit.tree->list(py::field::kBody)[0]->kind,
            py::NodeKind::kFunctionDef);
  EXPECT_THROW(ParseSource("def f(:"), SyntaxError);

  SourceUnit fixture = ParseSource(ReadFixture("move_one_ball.py"));
  const auto& body = fixture.tree->list(py::field::kBody);
  ASSERT_EQ(body.size(), 1u);
  int loops = 0;
  for (const auto& stmt : body[0]->list(py::field::kDefBody)) {
    if (stmt->kind == py::NodeKind::kFor) ++loops;
  }
  EXPECT_EQ(loops, 1);
}

TEST(ManifestTest, RoundTrip) {
  MutationOptions options;
  options.weighted = true;
  std::vector<Mutant> mutants =
      GenerateMutants(ParseSource(ReadFixture("move_one_ball.py")), options);
  std::string json = MutantsToJson(mutants);
  EXPECT_EQ(MutantsFromJson(json), mutants);
  EXPECT_EQ(MutantsToJson(MutantsFromJson(json)), json);
  EXPECT_THROW(MutantsFromJson("{"), DomainError);
  EXPECT_THROW(MutantsFromJson("[{\"id\": 1}]"), DomainError);
}

TEST(CategoryTest, NamesRoundTrip) {
  for (Category c : kAllCategories) {
    EXPECT_EQ(ParseCategory(CategoryName(c)), c);
  }
  EXPECT_EQ(ParseCategory("crp"), Category::kCRP);
  EXPECT_THROW(ParseCategory("XYZ"), DomainError);
}

}  // namespace
}  // namespace mist
