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

#ifndef MIST_RERANKER_H_
#define MIST_RERANKER_H_

#include <string>
#include <string_view>
#include <vector>

#include "mist/executor.h"

namespace mist {

struct Named {
  std::string id;
  std::string text;
};

struct ConsensusMatrix {
  std::vector<std::string> candidates;
  std::vector<std::string> suites;
  // grid[candidate][suite] is 1 when every test method of the suite passes.
  std::vector<std::vector<int>> grid;
  std::vector<int> scores;
};

// Row sums of `grid`.
std::vector<int> ConsensusScores(const std::vector<std::vector<int>>& grid);

// A candidate that does not parse gets a zero row without being run; so
// does every candidate for a suite with no discoverable test methods.
// Throws DomainError when either list is empty.
ConsensusMatrix BuildConsensus(const std::vector<Named>& candidates,
                               const std::vector<Named>& suites,
                               TestExecutor& executor, int workers = 1);

// Index of the highest score, lowest index on ties. Throws DomainError
// when there are no candidates.
std::size_t SelectBest(const ConsensusMatrix& matrix);

std::string ConsensusToJson(const ConsensusMatrix& matrix);

}  // namespace mist

#endif  // MIST_RERANKER_H_
