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

#ifndef MIST_REWARD_H_
#define MIST_REWARD_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mist/executor.h"
#include "mist/mutation.h"
#include "mist/verdict.h"

namespace mist {

// Weights of assertion primitives for the quality term.
struct QualityTable {
  double strict = 1.0;      // assertEqual, assertIs, `assert a == b`, ...
  double exception = 1.2;   // assertRaises, assertWarns, ...
  double approximate = 1.0; // assertAlmostEqual, assertCountEqual, ...
  double membership = 0.7;  // assertIn, assertIsInstance, `assert a in b`
  double boolean = 0.4;     // assertTrue, assertFalse, bare `assert x`
  // Multiplier for every occurrence of a kind after its first.
  double repeat_factor = 0.5;
};

struct RewardConfig {
  double alpha = 0.05;
  double beta = 3.0;
  double rho_base = 0.5;
  double gamma = 1.0;
  int k_max = 10;
  double r_fail_suite = -100.0;
  double r_fail_method = -10.0;
  bool pool_scaling = false;
  bool truncate_on_failure = false;
  double quality_cap = 3.0;
  double sigma_eps = 1e-8;
  double timeout_s = 5.0;
  int workers = 0;
  QualityTable quality;

  // Throws DomainError when an invariant is violated.
  void Validate() const;
};

enum class StepCase { kFailure, kRedundant, kEffective };
std::string_view StepCaseName(StepCase c);

struct RewardStep {
  std::string method;
  Verdict verdict;
  std::vector<std::string> new_kills;
  double delta = 0.0;
  double penalty = 0.0;
  double r_t = 0.0;
  StepCase step_case = StepCase::kFailure;
};

struct RewardTrace {
  std::vector<RewardStep> steps;
  std::set<std::string> history_final;
  int k_valid = 0;
  double r_total = 0.0;
};

// Sum of weights over kills not already in history. Throws MissingWeight.
double MarginalUtility(const std::vector<std::string>& kills,
                       const std::set<std::string>& history,
                       const std::map<std::string, double>& weights);

// rho_base * exp(gamma * t / k_max), t counted from 0.
double DynamicPenalty(int t, const RewardConfig& cfg);

// Assertion-primitive score of one test method's source (a `def`, possibly
// indented). Unparseable text scores 0.
double QualityScore(std::string_view method_source, const RewardConfig& cfg);

// Piecewise step reward. `pool_size` is |M|, used only with pool_scaling.
std::pair<double, StepCase> StepReward(const Verdict& verdict, double delta,
                                       int t, double quality,
                                       const RewardConfig& cfg,
                                       std::size_t pool_size = 0);

// Sum of the first k_valid rewards over sqrt(k_valid); r_fail_suite when
// k_valid is 0.
double TrajectoryReward(const std::vector<double>& step_rewards, int k_valid,
                        const RewardConfig& cfg);

// Scores a generated suite method by method. Each method runs against the
// source; one that passes is then run against every surviving vulnerable
// mutant not yet in the history.
RewardTrace ScoreTrajectory(const std::string& source,
                            const std::vector<Mutant>& mutants,
                            const std::string& suite_source,
                            const RewardConfig& cfg, TestExecutor& executor,
                            const std::optional<std::string>& smoke_tests =
                                std::nullopt);

std::string RewardTraceToJson(const RewardTrace& trace);

}  // namespace mist

#endif  // MIST_REWARD_H_
