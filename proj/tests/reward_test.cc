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

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mist/errors.h"
#include "oracles.h"
#include "test_support.h"

namespace mist {
namespace {

const std::map<std::string, double> kUnitWeights = {
    {"m1", 1.0}, {"m2", 1.0}, {"m3", 1.0}};

TEST(MarginalUtilityTest, Examples) {
  EXPECT_DOUBLE_EQ(MarginalUtility({"m1", "m2"}, {}, kUnitWeights), 2.0);
  EXPECT_DOUBLE_EQ(MarginalUtility({"m1"}, {"m1"}, kUnitWeights), 0.0);
  EXPECT_DOUBLE_EQ(MarginalUtility({"m1", "m2", "m3"}, {"m2"},
                                   {{"m1", 1.0}, {"m2", 5.0}, {"m3", 2.0}}),
                   3.0);
}

TEST(MarginalUtilityTest, MissingWeightThrows) {
  EXPECT_THROW(MarginalUtility({"m9"}, {}, kUnitWeights), MissingWeight);
}

TEST(MarginalUtilityTest, RepeatedKillCountsOnce) {
  EXPECT_DOUBLE_EQ(MarginalUtility({"m1", "m1"}, {}, kUnitWeights), 1.0);
}

TEST(MarginalUtilityTest, ZeroGainAndSubmodularity) {
  oracle::Rng rng(11);
  std::map<std::string, double> weights;
  for (int m = 0; m < 12; ++m) {
    weights[fmt::format("m{}", m)] = 1.0 + 0.5 * oracle::Uniform(rng, 0, 2);
  }
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> kills;
    std::set<std::string> h1, h2;
    for (const auto& [id, w] : weights) {
      if (oracle::Chance(rng, 0.4)) kills.push_back(id);
      bool in1 = oracle::Chance(rng, 0.3);
      if (in1) h1.insert(id);
      if (in1 || oracle::Chance(rng, 0.3)) h2.insert(id);
    }
    EXPECT_GE(MarginalUtility(kills, h1, weights),
              MarginalUtility(kills, h2, weights));
    std::set<std::string> superset(kills.begin(), kills.end());
    superset.insert(h1.begin(), h1.end());
    EXPECT_EQ(MarginalUtility(kills, superset, weights), 0.0);
  }
}

TEST(MarginalUtilityTest, UnitWeightsCountNewKills) {
  std::map<std::string, double> weights = {
      {"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}};
  EXPECT_EQ(MarginalUtility({"a", "b", "c"}, {"b"}, weights), 2.0);
}

TEST(DynamicPenaltyTest, Examples) {
  RewardConfig cfg;
  EXPECT_DOUBLE_EQ(DynamicPenalty(0, cfg), 0.5);
  EXPECT_NEAR(DynamicPenalty(10, cfg), 0.5 * std::exp(1.0), 1e-12);
  EXPECT_NEAR(DynamicPenalty(10, cfg), 1.35914, 1e-5);
  EXPECT_NEAR(DynamicPenalty(5, cfg), 0.82436, 1e-5);
}

TEST(DynamicPenaltyTest, MonotoneInStep) {
  RewardConfig cfg;
  for (int t = 0; t < 30; ++t) {
    EXPECT_LT(DynamicPenalty(t, cfg), DynamicPenalty(t + 1, cfg));
  }
  cfg.gamma = 0.0;
  for (int t = 0; t < 30; ++t) EXPECT_EQ(DynamicPenalty(t, cfg), 0.5);
}

TEST(QualityScoreTest, Examples) {
  RewardConfig cfg;
  EXPECT_EQ(QualityScore("def test_a(self):\n    pass\n", cfg), 0.0);
  EXPECT_DOUBLE_EQ(
      QualityScore("def test_a(self):\n    self.assertEqual(f(1), 2)\n", cfg),
      1.0);
  std::string ten = "def test_a(self):\n";
  for (int i = 0; i < 10; ++i) ten += "    self.assertTrue(f(1))\n";
  EXPECT_NEAR(QualityScore(ten, cfg), 2.2, 1e-12);
}

TEST(QualityScoreTest, KindsAndCap) {
  RewardConfig cfg;
  const std::string method =
      "    def test_a(self):\n"
      "        with self.assertRaises(ValueError):\n"
      "            f(-1)\n"
      "        self.assertIn(1, f(2))\n"
      "        assert f(1) == 2\n"
      "        assert f(3)\n";
  // exception 1.2 + membership 0.7 + strict 1.0 + boolean 0.4, capped.
  EXPECT_DOUBLE_EQ(QualityScore(method, cfg), 3.0);
  cfg.quality_cap = 10.0;
  EXPECT_DOUBLE_EQ(QualityScore(method, cfg), 3.3);
  EXPECT_DOUBLE_EQ(QualityScore("assert x in y\nassert x not in y\n", cfg),
                   0.7 + 0.35);
  EXPECT_EQ(QualityScore("def broken(:\n", cfg), 0.0);
}

TEST(StepRewardTest, Examples) {
  RewardConfig cfg;
  auto [fail, fail_case] = StepReward(Verdict{Status::kFail}, 0.0, 0, 1.0, cfg);
  EXPECT_EQ(fail, -10.0);
  EXPECT_EQ(fail_case, StepCase::kFailure);

  auto [redundant, redundant_case] =
      StepReward(Verdict{Status::kPass}, 0.0, 3, 1.0, cfg);
  EXPECT_NEAR(redundant, -0.5 * std::exp(0.3), 1e-12);
  EXPECT_NEAR(redundant, -0.67493, 1e-5);
  EXPECT_EQ(redundant_case, StepCase::kRedundant);

  auto [effective, effective_case] =
      StepReward(Verdict{Status::kPass}, 2.0, 0, 1.0, cfg);
  EXPECT_NEAR(effective, 6.05, 1e-12);
  EXPECT_EQ(effective_case, StepCase::kEffective);
}

TEST(StepRewardTest, PoolScaling) {
  RewardConfig cfg;
  cfg.pool_scaling = true;
  auto [r, c] = StepReward(Verdict{Status::kPass}, 2.0, 0, 1.0, cfg, 50);
  EXPECT_NEAR(r, 0.05 + 3.0 * 2.0 * 1.5, 1e-12);
  EXPECT_EQ(c, StepCase::kEffective);
}

TEST(StepRewardTest, EveryNonPassIsFailure) {
  RewardConfig cfg;
  for (Status s : {Status::kFail, Status::kError, Status::kTimeout}) {
    EXPECT_EQ(StepReward(Verdict{s}, 5.0, 0, 1.0, cfg).second,
              StepCase::kFailure);
  }
}

TEST(TrajectoryRewardTest, Examples) {
  RewardConfig cfg;
  EXPECT_EQ(TrajectoryReward({3.0}, 1, cfg), 3.0);
  EXPECT_EQ(TrajectoryReward({2, 2, 2, 2}, 4, cfg), 4.0);
  EXPECT_EQ(TrajectoryReward({}, 0, cfg), -100.0);
}

TEST(RewardConfigTest, Validate) {
  RewardConfig cfg;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.k_max = 0;
  EXPECT_THROW(cfg.Validate(), DomainError);
  cfg = {};
  cfg.rho_base = -1;
  EXPECT_THROW(cfg.Validate(), DomainError);
  cfg = {};
  cfg.quality_cap = -0.1;
  EXPECT_THROW(cfg.Validate(), DomainError);
}

// Fig. 5 scenario with scripted verdicts: the three baseline tests pass on
// both the source and the range mutant; the [2, 1] test exposes it.
class CaseStudyTrajectory : public ::testing::Test {
 protected:
  void SetUp() override {
    source_ = ReadFixture("move_one_ball.py");
    MutationOptions options;
    options.categories = {Category::kCRP};
    for (const Mutant& m : GenerateMutants(ParseSource(source_), options)) {
      if (m.mutated_line == 13 && m.mutated_fragment == "2") range_ = m;
    }
    ASSERT_FALSE(range_.id.empty());
  }

  std::string Suite(bool with_extra) const {
    std::string suite =
        "import unittest\n\n\nclass TestMoveOneBall(unittest.TestCase):\n"
        "    def test_empty(self):\n"
        "        self.assertTrue(move_one_ball([]))\n\n"
        "    def test_sorted(self):\n"
        "        self.assertTrue(move_one_ball([1, 2, 3]))\n\n"
        "    def test_rotated(self):\n"
        "        self.assertTrue(move_one_ball([3, 4, 5, 1, 2]))\n";
    if (with_extra) {
      suite +=
          "\n    def test_two(self):\n"
          "        self.assertTrue(move_one_ball([2, 1]))\n";
    }
    return suite;
  }

  void Script(ReplayExecutor& replay) const {
    for (const char* method :
         {"TestMoveOneBall.test_empty", "TestMoveOneBall.test_sorted",
          "TestMoveOneBall.test_rotated", "TestMoveOneBall.test_two"}) {
      replay.Record(source_, method, Verdict{Status::kPass});
      bool exposes = std::string(method) == "TestMoveOneBall.test_two";
      replay.Record(range_.mutated_source, method,
                    Verdict{exposes ? Status::kFail : Status::kPass});
    }
  }

  std::string source_;
  Mutant range_;
};

TEST_F(CaseStudyTrajectory, BaselineLeavesMutantAlive) {
  ReplayExecutor replay;
  Script(replay);
  RewardTrace trace =
      ScoreTrajectory(source_, {range_}, Suite(false), RewardConfig{}, replay);
  ASSERT_EQ(trace.steps.size(), 3u);
  for (const RewardStep& step : trace.steps) {
    EXPECT_EQ(step.step_case, StepCase::kRedundant);
  }
  EXPECT_TRUE(trace.history_final.empty());
  EXPECT_EQ(trace.k_valid, 3);
}

TEST_F(CaseStudyTrajectory, ExtraTestKillsMutant) {
  ReplayExecutor replay;
  Script(replay);
  RewardTrace trace =
      ScoreTrajectory(source_, {range_}, Suite(true), RewardConfig{}, replay);
  ASSERT_EQ(trace.steps.size(), 4u);
  EXPECT_EQ(trace.steps[3].step_case, StepCase::kEffective);
  EXPECT_EQ(trace.steps[3].new_kills, std::vector<std::string>{range_.id});
  EXPECT_EQ(trace.history_final, std::set<std::string>{range_.id});
  // 0.05 * 0.4 + 3.0 * 1.0 after three redundant steps at t = 0, 1, 2.
  double expected = (-0.5 - 0.5 * std::exp(0.1) - 0.5 * std::exp(0.2) +
                     0.02 + 3.0) / 2.0;
  EXPECT_NEAR(trace.r_total, expected, 1e-12);
}

TEST(ScoreTrajectoryTest, SuiteWithoutMethodsIsSuiteFailure) {
  ReplayExecutor replay;
  for (const char* suite :
       {"import unittest\n", "class T:\n    def test_a(self): pass\n",
        "def test_(:\n"}) {
    RewardTrace trace =
        ScoreTrajectory("x = 1\n", {}, suite, RewardConfig{}, replay);
    EXPECT_EQ(trace.r_total, -100.0) << suite;
    EXPECT_TRUE(trace.steps.empty());
    EXPECT_EQ(trace.k_valid, 0);
  }
  EXPECT_EQ(replay.calls(), 0u);
}

TEST(ScoreTrajectoryTest, MatchesReferenceOnRandomInstances) {
  oracle::Rng rng(20260401);
  for (int trial = 0; trial < 300; ++trial) {
    oracle::RewardInstance in = oracle::RandomRewardInstance(rng);
    ReplayExecutor replay;
    oracle::RecordInstance(in, replay);
    RewardTrace trace =
        ScoreTrajectory(oracle::InstanceSource(), oracle::InstanceMutants(in),
                        oracle::InstanceSuite(in), in.cfg, replay);
    ASSERT_NEAR(trace.r_total, oracle::ReferenceReward(in), 1e-9)
        << "trial " << trial;
  }
}

TEST(ScoreTrajectoryTest, NewKillsPartitionHistory) {
  oracle::Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    oracle::RewardInstance in = oracle::RandomRewardInstance(rng);
    ReplayExecutor replay;
    oracle::RecordInstance(in, replay);
    RewardTrace trace =
        ScoreTrajectory(oracle::InstanceSource(), oracle::InstanceMutants(in),
                        oracle::InstanceSuite(in), in.cfg, replay);
    std::multiset<std::string> all;
    for (const RewardStep& step : trace.steps) {
      all.insert(step.new_kills.begin(), step.new_kills.end());
      EXPECT_GE(step.delta, 0.0);
      EXPECT_GE(step.penalty, 0.0);
      if (step.step_case == StepCase::kEffective) EXPECT_GT(step.delta, 0.0);
    }
    EXPECT_EQ(std::set<std::string>(all.begin(), all.end()),
              trace.history_final);
    EXPECT_EQ(all.size(), trace.history_final.size());
  }
}

TEST(ScoreTrajectoryTest, KilledSetIgnoresMethodOrder) {
  oracle::Rng rng(99);
  int reward_changed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    oracle::RewardInstance in = oracle::RandomRewardInstance(rng);
    in.cfg.truncate_on_failure = false;
    oracle::RewardInstance reversed = in;
    std::reverse(reversed.source_status.begin(), reversed.source_status.end());
    std::reverse(reversed.assertions.begin(), reversed.assertions.end());
    for (auto& row : reversed.mutant_status) {
      std::reverse(row.begin(), row.end());
    }
    auto run = [](const oracle::RewardInstance& x) {
      ReplayExecutor replay;
      oracle::RecordInstance(x, replay);
      return ScoreTrajectory(oracle::InstanceSource(),
                             oracle::InstanceMutants(x),
                             oracle::InstanceSuite(x), x.cfg, replay);
    };
    RewardTrace a = run(in);
    RewardTrace b = run(reversed);
    EXPECT_EQ(a.history_final, b.history_final);
    reward_changed += std::abs(a.r_total - b.r_total) > 1e-9;
  }
  EXPECT_GT(reward_changed, 0);
}

TEST(ScoreTrajectoryTest, PrefilterBySuiteHeadKeepsHeadReward) {
  oracle::Rng rng(57);
  for (int trial = 0; trial < 200; ++trial) {
    oracle::RewardInstance in = oracle::RandomRewardInstance(rng);
    if (in.methods == 0) continue;
    oracle::RewardInstance head = in;
    head.methods = 1;
    const std::string smoke = oracle::InstanceSuite(head);
    ReplayExecutor replay;
    oracle::RecordInstance(in, replay);
    const auto mutants = oracle::InstanceMutants(in);
    const std::string suite = oracle::InstanceSuite(in);
    RewardTrace plain = ScoreTrajectory(oracle::InstanceSource(), mutants,
                                        suite, in.cfg, replay);
    RewardTrace filtered = ScoreTrajectory(oracle::InstanceSource(), mutants,
                                           suite, in.cfg, replay, smoke);
    ASSERT_FALSE(filtered.steps.empty());
    EXPECT_EQ(filtered.steps[0].new_kills, plain.steps[0].new_kills);
    EXPECT_EQ(filtered.steps[0].r_t, plain.steps[0].r_t);
  }
}

TEST(ScoreTrajectoryTest, FailureContinuesUnlessTruncating) {
  ReplayExecutor replay;
  const std::string source = "x = 1\n";
  const std::string suite =
      "import unittest\n\n\nclass T(unittest.TestCase):\n"
      "    def test_a(self):\n        pass\n\n"
      "    def test_b(self):\n        pass\n";
  replay.Record(source, "T.test_a", Verdict{Status::kError});
  replay.Record(source, "T.test_b", Verdict{Status::kPass});
  RewardConfig cfg;
  RewardTrace full = ScoreTrajectory(source, {}, suite, cfg, replay);
  EXPECT_EQ(full.k_valid, 2);
  EXPECT_NEAR(full.r_total, (-10.0 - 0.5 * std::exp(0.1)) / std::sqrt(2.0),
              1e-12);
  cfg.truncate_on_failure = true;
  RewardTrace cut = ScoreTrajectory(source, {}, suite, cfg, replay);
  EXPECT_EQ(cut.k_valid, 1);
  EXPECT_EQ(cut.r_total, -10.0);
}

TEST(ScoreTrajectoryTest, OnlyPrefilteredMutantsAreRun) {
  ReplayExecutor replay;
  const std::string source = "def f(x):\n    return x + 1\n";
  const std::string suite =
      "import unittest\n\n\nclass T(unittest.TestCase):\n"
      "    def test_a(self):\n        self.assertEqual(f(1), 2)\n";
  const std::string smoke =
      "import unittest\n\n\nclass S(unittest.TestCase):\n"
      "    def test_smoke(self):\n        self.assertEqual(f(0), 1)\n";
  Mutant weak{"weak", Category::kCRP, 2, 2, "1", "2",
              "def f(x):\n    return x + 2\n", 1.0};
  Mutant hidden{"hidden", Category::kAOR, 2, 2, "x + 1", "x * 1",
                "def f(x):\n    return x * 1\n", 1.0};
  replay.Record(source, "S.test_smoke", Verdict{Status::kPass});
  replay.Record(weak.mutated_source, "S.test_smoke", Verdict{Status::kFail});
  replay.Record(hidden.mutated_source, "S.test_smoke", Verdict{Status::kPass});
  replay.Record(source, "T.test_a", Verdict{Status::kPass});
  replay.Record(weak.mutated_source, "T.test_a", Verdict{Status::kFail});
  // `hidden` has no T.test_a entry: running it would throw.
  RewardTrace trace = ScoreTrajectory(source, {weak, hidden}, suite,
                                      RewardConfig{}, replay, smoke);
  EXPECT_EQ(trace.history_final, std::set<std::string>{"weak"});
}

TEST(RewardTraceToJsonTest, Shape) {
  RewardTrace trace;
  RewardStep step;
  step.method = "T.test_a";
  step.verdict = Verdict{Status::kPass};
  step.new_kills = {"m1"};
  step.delta = 1.0;
  step.r_t = 3.05;
  step.step_case = StepCase::kEffective;
  trace.steps.push_back(step);
  trace.k_valid = 1;
  trace.r_total = 3.05;
  auto j = nlohmann::json::parse(RewardTraceToJson(trace));
  EXPECT_EQ(j["r_total"], 3.05);
  EXPECT_EQ(j["k_valid"], 1);
  EXPECT_EQ(j["steps"][0]["method"], "T.test_a");
  EXPECT_EQ(j["steps"][0]["status"], "PASS");
  EXPECT_EQ(j["steps"][0]["case"], "EFFECTIVE");
  EXPECT_EQ(j["steps"][0]["new_kills"], nlohmann::json({"m1"}));
  EXPECT_EQ(j["steps"][0].size(), 6u);
}

}  // namespace
}  // namespace mist
