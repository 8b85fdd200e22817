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

#include "mist/reward.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mist/errors.h"
#include "mist/kill_matrix.h"
#include "mist/python/parser.h"

namespace mist {

using py::Node;
using py::NodeKind;

void RewardConfig::Validate() const {
  if (k_max < 1) throw DomainError("k_max must be at least 1");
  if (rho_base < 0) throw DomainError("rho_base must be nonnegative");
  if (gamma < 0) throw DomainError("gamma must be nonnegative");
  if (quality_cap < 0) throw DomainError("quality_cap must be nonnegative");
  if (!(sigma_eps > 0)) throw DomainError("sigma_eps must be positive");
  if (!(timeout_s > 0)) throw DomainError("timeout_s must be positive");
  if (workers < 0) throw DomainError("workers must be nonnegative");
}

std::string_view StepCaseName(StepCase c) {
  switch (c) {
    case StepCase::kFailure: return "FAILURE";
    case StepCase::kRedundant: return "REDUNDANT";
    case StepCase::kEffective: return "EFFECTIVE";
  }
  return "FAILURE";
}

double MarginalUtility(const std::vector<std::string>& kills,
                       const std::set<std::string>& history,
                       const std::map<std::string, double>& weights) {
  std::set<std::string> counted;
  double total = 0.0;
  for (const std::string& id : kills) {
    auto w = weights.find(id);
    if (w == weights.end()) throw MissingWeight(id);
    if (history.count(id) || !counted.insert(id).second) continue;
    total += w->second;
  }
  return total;
}

double DynamicPenalty(int t, const RewardConfig& cfg) {
  return cfg.rho_base * std::exp(cfg.gamma * t / cfg.k_max);
}

namespace {

enum class Primitive { kStrict, kException, kApproximate, kMembership, kBoolean };

std::optional<Primitive> ClassifyMethod(std::string_view name) {
  static const std::map<std::string_view, Primitive> kTable = {
      {"assertEqual", Primitive::kStrict},
      {"assertEquals", Primitive::kStrict},
      {"assertNotEqual", Primitive::kStrict},
      {"assertIs", Primitive::kStrict},
      {"assertIsNot", Primitive::kStrict},
      {"assertIsNone", Primitive::kStrict},
      {"assertIsNotNone", Primitive::kStrict},
      {"assertGreater", Primitive::kStrict},
      {"assertGreaterEqual", Primitive::kStrict},
      {"assertLess", Primitive::kStrict},
      {"assertLessEqual", Primitive::kStrict},
      {"assertRaises", Primitive::kException},
      {"assertRaisesRegex", Primitive::kException},
      {"assertWarns", Primitive::kException},
      {"assertWarnsRegex", Primitive::kException},
      {"assertAlmostEqual", Primitive::kApproximate},
      {"assertNotAlmostEqual", Primitive::kApproximate},
      {"assertCountEqual", Primitive::kApproximate},
      {"assertListEqual", Primitive::kApproximate},
      {"assertTupleEqual", Primitive::kApproximate},
      {"assertSetEqual", Primitive::kApproximate},
      {"assertDictEqual", Primitive::kApproximate},
      {"assertSequenceEqual", Primitive::kApproximate},
      {"assertMultiLineEqual", Primitive::kApproximate},
      {"assertIn", Primitive::kMembership},
      {"assertNotIn", Primitive::kMembership},
      {"assertIsInstance", Primitive::kMembership},
      {"assertNotIsInstance", Primitive::kMembership},
      {"assertRegex", Primitive::kMembership},
      {"assertNotRegex", Primitive::kMembership},
      {"assertTrue", Primitive::kBoolean},
      {"assertFalse", Primitive::kBoolean},
      {"assert_", Primitive::kBoolean},
  };
  auto it = kTable.find(name);
  if (it == kTable.end()) return std::nullopt;
  return it->second;
}

Primitive ClassifyAssertStatement(const Node& stmt) {
  const Node* test = stmt.child(py::field::kAssertTest);
  if (test && test->kind == NodeKind::kCompare && test->ops.size() == 1) {
    switch (test->ops[0]) {
      case py::Op::kIn:
      case py::Op::kNotIn:
        return Primitive::kMembership;
      default:
        return Primitive::kStrict;
    }
  }
  return Primitive::kBoolean;
}

void CollectPrimitives(const Node& node, std::vector<Primitive>& out) {
  if (node.kind == NodeKind::kAssert) out.push_back(ClassifyAssertStatement(node));
  if (node.kind == NodeKind::kCall) {
    const Node* func = node.child(py::field::kFunc);
    if (func && func->kind == NodeKind::kAttribute) {
      if (auto p = ClassifyMethod(func->name)) out.push_back(*p);
    }
  }
  for (const Node* child : py::SourceOrderChildren(node)) {
    CollectPrimitives(*child, out);
  }
}

double Weight(Primitive p, const QualityTable& q) {
  switch (p) {
    case Primitive::kStrict: return q.strict;
    case Primitive::kException: return q.exception;
    case Primitive::kApproximate: return q.approximate;
    case Primitive::kMembership: return q.membership;
    case Primitive::kBoolean: return q.boolean;
  }
  return 0.0;
}

double QualityOfNode(const Node& method, const RewardConfig& cfg) {
  std::vector<Primitive> found;
  CollectPrimitives(method, found);
  std::set<Primitive> seen;
  double score = 0.0;
  for (Primitive p : found) {
    double w = Weight(p, cfg.quality);
    score += seen.insert(p).second ? w : w * cfg.quality.repeat_factor;
  }
  return std::min(score, cfg.quality_cap);
}

std::string Dedent(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  std::optional<std::string_view> margin;
  for (std::string_view line : lines) {
    std::size_t indent = line.find_first_not_of(" \t");
    if (indent == std::string_view::npos) continue;
    std::string_view lead = line.substr(0, indent);
    if (!margin) {
      margin = lead;
    } else {
      std::size_t common = 0;
      while (common < margin->size() && common < lead.size() &&
             (*margin)[common] == lead[common]) {
        ++common;
      }
      margin = margin->substr(0, common);
    }
  }
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (margin && line.substr(0, margin->size()) == *margin) {
      line.remove_prefix(margin->size());
    }
    out += line;
    if (i + 1 < lines.size()) out += '\n';
  }
  return out;
}

}  // namespace

double QualityScore(std::string_view method_source, const RewardConfig& cfg) {
  py::NodePtr tree;
  try {
    tree = py::Parse(Dedent(method_source));
  } catch (const SyntaxError&) {
    return 0.0;
  }
  return QualityOfNode(*tree, cfg);
}

std::pair<double, StepCase> StepReward(const Verdict& verdict, double delta,
                                       int t, double quality,
                                       const RewardConfig& cfg,
                                       std::size_t pool_size) {
  if (verdict.status != Status::kPass) {
    return {cfg.r_fail_method, StepCase::kFailure};
  }
  if (delta <= 0.0) return {-DynamicPenalty(t, cfg), StepCase::kRedundant};
  double utility = cfg.pool_scaling
                       ? delta * (1.0 + static_cast<double>(pool_size) / 100.0)
                       : delta;
  return {cfg.alpha * quality + cfg.beta * utility, StepCase::kEffective};
}

double TrajectoryReward(const std::vector<double>& step_rewards, int k_valid,
                        const RewardConfig& cfg) {
  if (k_valid <= 0) return cfg.r_fail_suite;
  double sum = 0.0;
  int n = std::min<int>(k_valid, static_cast<int>(step_rewards.size()));
  for (int i = 0; i < n; ++i) sum += step_rewards[i];
  return sum / std::sqrt(static_cast<double>(k_valid));
}

namespace {

// Maps "Class.method" to its definition node in `module`.
std::map<std::string, const Node*> MethodNodes(const Node& module) {
  std::map<std::string, const Node*> out;
  for (const auto& stmt : module.list(py::field::kBody)) {
    if (stmt->kind != NodeKind::kClassDef) continue;
    for (const auto& member : stmt->list(py::field::kClassBody)) {
      if (member->kind == NodeKind::kFunctionDef ||
          member->kind == NodeKind::kAsyncFunctionDef) {
        out.emplace(stmt->name + "." + member->name, member.get());
      }
    }
  }
  return out;
}

}  // namespace

RewardTrace ScoreTrajectory(const std::string& source,
                            const std::vector<Mutant>& mutants,
                            const std::string& suite_source,
                            const RewardConfig& cfg, TestExecutor& executor,
                            const std::optional<std::string>& smoke_tests) {
  RewardTrace trace;
  std::vector<std::string> methods;
  py::NodePtr suite_tree;
  try {
    suite_tree = py::Parse(suite_source);
    methods = DiscoverTestMethods(suite_source);
  } catch (const SyntaxError&) {
    methods.clear();
  }
  if (methods.empty()) {
    trace.r_total = cfg.r_fail_suite;
    return trace;
  }
  const auto nodes = MethodNodes(*suite_tree);
  const int workers = Limits{cfg.timeout_s, std::nullopt, cfg.workers}
                          .EffectiveWorkers();

  std::map<std::string, double> weights;
  for (const Mutant& m : mutants) weights[m.id] = m.weight;
  const std::vector<Mutant> vulnerable =
      PrefilterVulnerable(source, mutants, smoke_tests, executor, workers);

  std::vector<double> rewards;
  for (std::size_t t = 0; t < methods.size(); ++t) {
    RewardStep step;
    step.method = methods[t];
    step.verdict = executor.Run(source, suite_source, step.method);
    ++trace.k_valid;

    if (step.verdict.status == Status::kPass) {
      std::vector<const Mutant*> survivors;
      for (const Mutant& m : vulnerable) {
        if (!trace.history_final.count(m.id)) survivors.push_back(&m);
      }
      std::vector<Batch> batches;
      for (const Mutant* m : survivors) {
        batches.push_back(Batch{&m->mutated_source, &suite_source, {step.method}});
      }
      auto results = RunBatches(executor, batches, workers);
      for (std::size_t i = 0; i < survivors.size(); ++i) {
        if (IsKill(results[i][0].status)) {
          step.new_kills.push_back(survivors[i]->id);
        }
      }
      step.delta = MarginalUtility(step.new_kills, trace.history_final, weights);
    }

    auto node = nodes.find(step.method);
    double quality =
        node == nodes.end() ? 0.0 : QualityOfNode(*node->second, cfg);
    auto [r, c] = StepReward(step.verdict, step.delta, static_cast<int>(t),
                             quality, cfg, mutants.size());
    step.r_t = r;
    step.step_case = c;
    if (c == StepCase::kRedundant) step.penalty = -r;
    trace.history_final.insert(step.new_kills.begin(), step.new_kills.end());
    rewards.push_back(r);
    trace.steps.push_back(std::move(step));
    if (c == StepCase::kFailure && cfg.truncate_on_failure) break;
  }
  trace.r_total = TrajectoryReward(rewards, trace.k_valid, cfg);
  return trace;
}

std::string RewardTraceToJson(const RewardTrace& trace) {
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const RewardStep& s : trace.steps) {
    steps.push_back({{"method", s.method},
                     {"status", StatusName(s.verdict.status)},
                     {"case", StepCaseName(s.step_case)},
                     {"delta", s.delta},
                     {"r_t", s.r_t},
                     {"new_kills", s.new_kills}});
  }
  nlohmann::ordered_json out = {{"r_total", trace.r_total},
                                {"k_valid", trace.k_valid},
                                {"steps", std::move(steps)}};
  return out.dump(2) + "\n";
}

}  // namespace mist
