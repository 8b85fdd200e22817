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

#include "mist/suite_tools.h"

#include <algorithm>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mist/errors.h"

namespace mist {
namespace {

std::vector<std::size_t> Indices(const KillMatrix& matrix,
                                 const std::vector<std::string>& ids) {
  std::vector<std::size_t> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) out.push_back(matrix.TestIndex(id));
  return out;
}

std::vector<bool> Covered(const KillMatrix& matrix,
                          const std::vector<std::size_t>& tests) {
  std::vector<bool> covered(matrix.mutants.size(), false);
  for (std::size_t t : tests) {
    for (std::size_t m = 0; m < matrix.mutants.size(); ++m) {
      if (matrix.Kills(t, m)) covered[m] = true;
    }
  }
  return covered;
}

double Gain(const KillMatrix& matrix, std::size_t t,
            const std::vector<bool>& covered, bool weighted) {
  double gain = 0.0;
  for (std::size_t m = 0; m < matrix.mutants.size(); ++m) {
    if (!covered[m] && matrix.Kills(t, m)) {
      gain += weighted ? matrix.weights[m] : 1.0;
    }
  }
  return gain;
}

// Greedy picks among `candidates`; returns positions into `candidates`.
std::vector<std::size_t> Greedy(const KillMatrix& matrix,
                                const std::vector<std::size_t>& candidates,
                                std::size_t k, bool weighted,
                                std::vector<double>* gains) {
  std::vector<bool> covered(matrix.mutants.size(), false);
  std::vector<bool> used(candidates.size(), false);
  std::vector<std::size_t> picks;
  while (picks.size() < k) {
    double best = 0.0;
    std::size_t best_pos = candidates.size();
    for (std::size_t pos = 0; pos < candidates.size(); ++pos) {
      if (used[pos]) continue;
      double g = Gain(matrix, candidates[pos], covered, weighted);
      if (g > best) {
        best = g;
        best_pos = pos;
      }
    }
    if (best_pos == candidates.size()) break;
    used[best_pos] = true;
    picks.push_back(best_pos);
    if (gains) gains->push_back(best);
    for (std::size_t m = 0; m < matrix.mutants.size(); ++m) {
      if (matrix.Kills(candidates[best_pos], m)) covered[m] = true;
    }
  }
  return picks;
}

}  // namespace

double MutationScore(const KillMatrix& matrix,
                     const std::vector<std::string>& suite) {
  if (matrix.mutants.empty()) throw EmptyMutantPool();
  std::vector<bool> covered = Covered(matrix, Indices(matrix, suite));
  return static_cast<double>(std::count(covered.begin(), covered.end(), true)) /
         static_cast<double>(matrix.mutants.size());
}

SelectionResult GreedySelect(const KillMatrix& matrix, std::size_t k) {
  std::vector<std::size_t> all(matrix.tests.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  SelectionResult result;
  for (std::size_t pos : Greedy(matrix, all, k, true, &result.gains)) {
    result.order.push_back(matrix.tests[pos]);
  }
  std::vector<bool> covered = Covered(matrix, Indices(matrix, result.order));
  for (std::size_t m = 0; m < covered.size(); ++m) {
    if (covered[m]) result.covered.insert(matrix.mutants[m]);
  }
  return result;
}

std::vector<std::string> MinimizeSuite(const KillMatrix& matrix,
                                       const std::vector<std::string>& suite) {
  std::vector<std::size_t> candidates = Indices(matrix, suite);
  std::vector<std::size_t> picks =
      Greedy(matrix, candidates, candidates.size(), false, nullptr);

  std::vector<std::size_t> kept;
  for (std::size_t pos : picks) kept.push_back(candidates[pos]);
  const std::vector<bool> target = Covered(matrix, kept);
  for (std::size_t i = kept.size(); i-- > 0;) {
    std::vector<std::size_t> without = kept;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
    if (Covered(matrix, without) == target) kept = std::move(without);
  }

  std::vector<std::string> out;
  for (std::size_t pos = 0; pos < candidates.size(); ++pos) {
    std::size_t t = candidates[pos];
    bool selected = std::find(kept.begin(), kept.end(), t) != kept.end();
    bool first = std::find(candidates.begin(), candidates.begin() + pos, t) ==
                 candidates.begin() + pos;
    if (selected && first) out.push_back(matrix.tests[t]);
  }
  return out;
}

std::vector<CurvePoint> UtilityCurve(const KillMatrix& matrix,
                                     const std::vector<std::string>& order) {
  std::set<std::string> seen;
  for (const std::string& id : order) {
    if (!seen.insert(id).second) throw DuplicateTest(id);
  }
  std::vector<std::size_t> tests = Indices(matrix, order);
  if (!tests.empty() && matrix.mutants.empty()) throw EmptyMutantPool();
  std::vector<CurvePoint> curve;
  std::vector<bool> covered(matrix.mutants.size(), false);
  for (std::size_t i = 0; i < tests.size(); ++i) {
    CurvePoint p;
    p.step = static_cast<int>(i) + 1;
    p.test_id = order[i];
    p.marginal_gain = Gain(matrix, tests[i], covered, true);
    for (std::size_t m = 0; m < matrix.mutants.size(); ++m) {
      if (matrix.Kills(tests[i], m)) covered[m] = true;
    }
    p.cumulative_score =
        static_cast<double>(std::count(covered.begin(), covered.end(), true)) /
        static_cast<double>(matrix.mutants.size());
    curve.push_back(std::move(p));
  }
  return curve;
}

std::string CurveToCsv(const std::vector<CurvePoint>& curve) {
  std::string out = "step,test_id,marginal_gain,cumulative_score\n";
  for (const CurvePoint& p : curve) {
    out += fmt::format("{},{},{},{}\n", p.step, p.test_id, p.marginal_gain,
                       p.cumulative_score);
  }
  return out;
}

std::string SelectionToJson(const KillMatrix& matrix,
                            const SelectionResult& selection) {
  nlohmann::ordered_json out;
  out["order"] = selection.order;
  out["gains"] = selection.gains;
  if (matrix.mutants.empty()) {
    out["score"] = nullptr;
  } else {
    out["score"] = MutationScore(matrix, selection.order);
  }
  return out.dump(2) + "\n";
}

}  // namespace mist
