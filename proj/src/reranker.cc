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

#include "mist/reranker.h"

#include <nlohmann/json.hpp>

#include "mist/errors.h"
#include "mist/kill_matrix.h"
#include "mist/python/parser.h"

namespace mist {

std::vector<int> ConsensusScores(const std::vector<std::vector<int>>& grid) {
  std::vector<int> scores;
  for (const auto& row : grid) {
    int sum = 0;
    for (int v : row) sum += v;
    scores.push_back(sum);
  }
  return scores;
}

ConsensusMatrix BuildConsensus(const std::vector<Named>& candidates,
                               const std::vector<Named>& suites,
                               TestExecutor& executor, int workers) {
  if (candidates.empty()) throw DomainError("no code candidates");
  if (suites.empty()) throw DomainError("no test suites");
  ConsensusMatrix matrix;
  for (const Named& c : candidates) matrix.candidates.push_back(c.id);
  for (const Named& s : suites) matrix.suites.push_back(s.id);
  matrix.grid.assign(candidates.size(), std::vector<int>(suites.size(), 0));

  std::vector<std::vector<std::string>> methods(suites.size());
  for (std::size_t j = 0; j < suites.size(); ++j) {
    try {
      methods[j] = DiscoverTestMethods(suites[j].text);
    } catch (const SyntaxError&) {
      methods[j].clear();
    }
  }

  std::vector<Batch> batches;
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!py::Parses(candidates[i].text)) continue;
    for (std::size_t j = 0; j < suites.size(); ++j) {
      if (methods[j].empty()) continue;
      batches.push_back(Batch{&candidates[i].text, &suites[j].text, methods[j]});
      cells.emplace_back(i, j);
    }
  }
  auto results = RunBatches(executor, batches, workers);
  for (std::size_t b = 0; b < cells.size(); ++b) {
    bool all_pass = true;
    for (const Verdict& v : results[b]) {
      all_pass = all_pass && v.status == Status::kPass;
    }
    matrix.grid[cells[b].first][cells[b].second] = all_pass ? 1 : 0;
  }
  matrix.scores = ConsensusScores(matrix.grid);
  return matrix;
}

std::size_t SelectBest(const ConsensusMatrix& matrix) {
  if (matrix.scores.empty()) throw DomainError("no code candidates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < matrix.scores.size(); ++i) {
    if (matrix.scores[i] > matrix.scores[best]) best = i;
  }
  return best;
}

std::string ConsensusToJson(const ConsensusMatrix& matrix) {
  nlohmann::ordered_json out;
  out["grid"] = matrix.grid;
  out["scores"] = matrix.scores;
  out["selected"] = matrix.candidates.at(SelectBest(matrix));
  return out.dump(2) + "\n";
}

}  // namespace mist
