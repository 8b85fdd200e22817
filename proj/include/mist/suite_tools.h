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

#ifndef MIST_SUITE_TOOLS_H_
#define MIST_SUITE_TOOLS_H_

#include <set>
#include <string>
#include <vector>

#include "mist/kill_matrix.h"

namespace mist {

// Fraction of mutants killed by at least one test of `suite`. Throws
// EmptyMutantPool when the matrix has no mutants and DomainError for
// unknown test ids.
double MutationScore(const KillMatrix& matrix,
                     const std::vector<std::string>& suite);

struct SelectionResult {
  std::vector<std::string> order;
  std::vector<double> gains;
  std::set<std::string> covered;
};

// Greedy weighted max-coverage: up to k picks, each maximizing the weight
// of newly killed mutants (lowest index on ties), stopping early at zero
// gain.
SelectionResult GreedySelect(const KillMatrix& matrix, std::size_t k);

// A subset of `suite` with the same killed set: greedy cover, then a
// reverse pass that drops tests whose removal keeps the cover. Returned in
// the order the tests appear in `suite`.
std::vector<std::string> MinimizeSuite(const KillMatrix& matrix,
                                       const std::vector<std::string>& suite);

struct CurvePoint {
  int step = 0;
  std::string test_id;
  double marginal_gain = 0.0;
  double cumulative_score = 0.0;
};

// Per-step weighted gain against the running history and cumulative
// mutation score. Throws DuplicateTest on repeated ids.
std::vector<CurvePoint> UtilityCurve(const KillMatrix& matrix,
                                     const std::vector<std::string>& order);

std::string CurveToCsv(const std::vector<CurvePoint>& curve);

// {"order": [...], "gains": [...], "score": x}; score is null when the
// matrix has no mutants.
std::string SelectionToJson(const KillMatrix& matrix,
                            const SelectionResult& selection);

}  // namespace mist

#endif  // MIST_SUITE_TOOLS_H_
