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

#ifndef MIST_KILL_MATRIX_H_
#define MIST_KILL_MATRIX_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mist/executor.h"
#include "mist/mutation.h"
#include "mist/verdict.h"

namespace mist {

// Test methods of a unittest-style module as "Class.method", in source
// order. A class qualifies when it derives from TestCase (bare or dotted)
// or from a qualifying class defined earlier in the module. Throws
// SyntaxError.
std::vector<std::string> DiscoverTestMethods(std::string_view tests_source);

struct KillMatrix {
  std::vector<std::string> tests;
  std::vector<std::string> mutants;
  std::vector<Verdict> source_verdicts;
  // grid[test][mutant]; empty for tests that did not pass on the source.
  std::vector<std::vector<std::optional<Verdict>>> grid;
  std::vector<double> weights;

  bool Kills(std::size_t test, std::size_t mutant) const {
    const auto& cell = grid[test][mutant];
    return source_verdicts[test].status == Status::kPass && cell &&
           IsKill(cell->status);
  }
  // Throw DomainError for unknown ids.
  std::size_t TestIndex(std::string_view id) const;
  std::size_t MutantIndex(std::string_view id) const;
};

// Runs every discovered test against the source, then (mutant-major) every
// source-passing test against each mutant.
KillMatrix BuildKillMatrix(const std::string& source,
                           const std::vector<Mutant>& mutants,
                           const std::string& test_module,
                           TestExecutor& executor, int workers = 1);

// Mutants killed by at least one method of `smoke_tests`; all mutants when
// no smoke module is given.
std::vector<Mutant> PrefilterVulnerable(
    const std::string& source, const std::vector<Mutant>& mutants,
    const std::optional<std::string>& smoke_tests, TestExecutor& executor,
    int workers = 1);

// CSV with header `test_id,mutant_id,status,duration_s`. Source verdicts are
// rows with an empty mutant_id; cells that were not evaluated carry status
// NOT_EVALUATED. Weights are not part of the format and read back as 1.
std::string KillMatrixToCsv(const KillMatrix& matrix);
KillMatrix KillMatrixFromCsv(std::string_view csv);

// Assigns weights by mutant id from a manifest. Ids missing from the
// manifest keep their weight.
void ApplyWeights(KillMatrix& matrix, const std::vector<Mutant>& mutants);

}  // namespace mist

#endif  // MIST_KILL_MATRIX_H_
