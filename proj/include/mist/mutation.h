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

#ifndef MIST_MUTATION_H_
#define MIST_MUTATION_H_

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mist/python/ast.h"
#include "mist/source_unit.h"

namespace mist {

enum class Category { kAOR, kROR, kLCR, kASR, kCRP, kUOI };

inline constexpr Category kAllCategories[] = {
    Category::kAOR, Category::kROR, Category::kLCR,
    Category::kASR, Category::kCRP, Category::kUOI};

std::string_view CategoryName(Category category);
// Accepts the three-letter tag in any case. Throws DomainError.
Category ParseCategory(std::string_view name);

struct Mutant {
  std::string id;
  Category category = Category::kAOR;
  int original_line = 1;
  int mutated_line = 1;
  std::string original_fragment;
  std::string mutated_fragment;
  std::string mutated_source;
  double weight = 1.0;

  friend bool operator==(const Mutant&, const Mutant&) = default;
};

struct MutationOptions {
  std::set<Category> categories{std::begin(kAllCategories),
                                std::end(kAllCategories)};
  std::optional<std::size_t> limit;
  bool weighted = false;
  double lambda = 0.25;
};

// A proposed single-node rewrite, before equivalence filtering and
// validation. `site` points into the unit's tree.
struct Candidate {
  Category category;
  const py::Node* site;
  py::NodePtr replacement;
  std::string path;
  int variant;
};

// Every transformation the operator table proposes, in depth-first source
// order, with nothing filtered.
std::vector<Candidate> EnumerateCandidates(const SourceUnit& unit,
                                           const std::set<Category>& categories);

// False when the rewrite is known to preserve semantics: a constant
// replaced by an equal value, or a sign flip on a literal zero.
bool PassesEquivalenceHeuristics(const py::Node& original,
                                 const py::Node& mutated);

// First-order mutants that survive the heuristics and reparse, truncated to
// options.limit. Deterministic.
std::vector<Mutant> GenerateMutants(const SourceUnit& unit,
                                    const MutationOptions& options = {});

// Traces a 1-based line of `original_text` through an LCS line diff into
// `mutated_text`.
int MapMutantLine(std::string_view original_text,
                  std::string_view mutated_text, int original_line);

// 1 + lambda * depth when weighted, else 1. Depth counts the if, for,
// while and try statements whose bodies (not headers) contain the node.
double AssignDifficultyWeight(const SourceUnit& unit, const py::Node& node,
                              bool weighted, double lambda = 0.25);

std::string MutantsToJson(const std::vector<Mutant>& mutants);
// Throws DomainError on malformed manifests.
std::vector<Mutant> MutantsFromJson(std::string_view json);

}  // namespace mist

#endif  // MIST_MUTATION_H_
