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

#include <chrono>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mist/errors.h"
#include "mist/executor.h"
#include "mist/kill_matrix.h"
#include "mist/verdict.h"

namespace mist {
namespace {

Limits Quick(double timeout = 0.3, int workers = 2) {
  Limits limits;
  limits.timeout_s = timeout;
  limits.workers = workers;
  return limits;
}

ProcessExecutor FakeExecutor(Limits limits = Quick()) {
  return ProcessExecutor({MIST_FAKE_RUNNER}, limits);
}

Mutant MakeMutant(std::string id, std::string source, double weight = 1.0) {
  Mutant m;
  m.id = std::move(id);
  m.mutated_source = std::move(source);
  m.weight = weight;
  return m;
}

const char kSuite[] =
    "import unittest\n"
    "# expect T.test_a M1 FAIL\n"
    "# expect T.test_b M2 ERROR\n"
    "# expect T.test_c * FAIL\n"
    "class T(unittest.TestCase):\n"
    "    def test_a(self):\n"
    "        pass\n"
    "    def test_b(self):\n"
    "        pass\n"
    "    def test_c(self):\n"
    "        pass\n";

TEST(ProtocolTest, RequestWireFormat) {
  JobRequest r{"7", "x = 1\n", "t", "T.test_a", 5.0};
  EXPECT_EQ(EncodeRequest(r),
            R"({"job_id":"7","code":"x = 1\n","tests":"t","method":"T.test_a","timeout_s":5.0})");
  EXPECT_EQ(DecodeRequest(EncodeRequest(r)), r);
}

TEST(ProtocolTest, ResponseWireFormat) {
  JobResponse r = DecodeResponse(
      R"({"job_id": "3", "status": "FAIL", "duration_s": 0.25, "detail": "AssertionError"})");
  EXPECT_EQ(r.job_id, "3");
  EXPECT_EQ(r.verdict.status, Status::kFail);
  EXPECT_DOUBLE_EQ(r.verdict.duration, 0.25);
  EXPECT_EQ(r.verdict.detail, "AssertionError");
  EXPECT_EQ(EncodeResponse(r),
            R"({"job_id":"3","status":"FAIL","duration_s":0.25,"detail":"AssertionError"})");
}

TEST(ProtocolTest, MalformedLinesAreInfrastructureErrors) {
  EXPECT_THROW(DecodeResponse("not json"), InfrastructureError);
  EXPECT_THROW(DecodeResponse(R"({"job_id":"1","status":"MAYBE","duration_s":0})"),
               InfrastructureError);
  EXPECT_THROW(DecodeResponse(R"({"job_id":"1","status":"PASS"})"),
               InfrastructureError);
  EXPECT_THROW(DecodeResponse(R"({"job_id":"1","status":"PASS","duration_s":-1})"),
               InfrastructureError);
  EXPECT_THROW(DecodeRequest(R"({"job_id":"1"})"), InfrastructureError);
}

TEST(VerdictTest, NormalizeEnforcesInvariants) {
  EXPECT_EQ(Normalize({Status::kPass, 0.1, "noise"}, 5.0).detail, "");
  EXPECT_DOUBLE_EQ(Normalize({Status::kTimeout, 4.9, ""}, 5.0).duration, 5.0);
  EXPECT_DOUBLE_EQ(Normalize({Status::kTimeout, 6.0, ""}, 5.0).duration, 6.0);
  EXPECT_EQ(Normalize({Status::kFail, 0.1, "why"}, 5.0).detail, "why");
  for (Status s : {Status::kPass, Status::kFail, Status::kError,
                   Status::kTimeout}) {
    EXPECT_EQ(ParseStatus(StatusName(s)), s);
  }
  EXPECT_FALSE(IsKill(Status::kPass));
  EXPECT_TRUE(IsKill(Status::kError));
  EXPECT_TRUE(IsKill(Status::kTimeout));
}

TEST(DiscoveryTest, FindsTestCaseMethodsInSourceOrder) {
  const char* module =
      "import unittest\n"
      "from unittest import TestCase\n"
      "class Helper:\n"
      "    def test_not_collected(self): pass\n"
      "class A(unittest.TestCase):\n"
      "    def test_z(self): pass\n"
      "    def helper(self): pass\n"
      "    def test_a(self): pass\n"
      "class B(TestCase):\n"
      "    async def test_async(self): pass\n"
      "class C(A):\n"
      "    def test_more(self): pass\n"
      "def test_free(): pass\n";
  EXPECT_EQ(DiscoverTestMethods(module),
            (std::vector<std::string>{"A.test_z", "A.test_a", "B.test_async",
                                      "C.test_more"}));
  EXPECT_TRUE(DiscoverTestMethods("x = 1\n").empty());
  EXPECT_THROW(DiscoverTestMethods("class A(:\n"), SyntaxError);
}

TEST(ProcessExecutorTest, ScriptedStatuses) {
  ProcessExecutor executor = FakeExecutor();
  std::string tests =
      "# expect m1 * FAIL\n# expect m2 * ERROR\n# expect m3 * TIMEOUT\n";
  auto verdicts = executor.RunBatch("code", tests, {"m0", "m1", "m2", "m3"});
  ASSERT_EQ(verdicts.size(), 4u);
  EXPECT_EQ(verdicts[0].status, Status::kPass);
  EXPECT_EQ(verdicts[0].detail, "");
  EXPECT_EQ(verdicts[1].status, Status::kFail);
  EXPECT_EQ(verdicts[2].status, Status::kError);
  EXPECT_EQ(verdicts[3].status, Status::kTimeout);
  EXPECT_GE(verdicts[3].duration, 0.3);
}

TEST(ProcessExecutorTest, HungRunnerIsKilledWithinGrace) {
  ProcessExecutor executor = FakeExecutor(Quick(0.2));
  auto start = std::chrono::steady_clock::now();
  auto verdicts =
      executor.RunBatch("code", "# expect hang * HANG\n", {"hang", "after"});
  double elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  EXPECT_EQ(verdicts[0].status, Status::kTimeout);
  EXPECT_GE(verdicts[0].duration, 0.2);
  EXPECT_LE(verdicts[0].duration, 0.2 + kTimeoutGraceSeconds + 0.5);
  EXPECT_LT(elapsed, 0.2 + kTimeoutGraceSeconds + 0.5);
  // The batch continues on a fresh runner.
  EXPECT_EQ(verdicts[1].status, Status::kPass);
  EXPECT_EQ(executor.spawned(), 2);
}

TEST(ProcessExecutorTest, RunnerExitIsAnError) {
  ProcessExecutor executor = FakeExecutor();
  auto verdicts =
      executor.RunBatch("code", "# expect boom * CRASH\n", {"boom", "ok"});
  EXPECT_EQ(verdicts[0].status, Status::kError);
  EXPECT_EQ(verdicts[1].status, Status::kPass);
}

TEST(ProcessExecutorTest, ProtocolViolationsAreInfrastructureErrors) {
  ProcessExecutor executor = FakeExecutor();
  EXPECT_THROW(executor.Run("code", "# expect * * GARBAGE\n", "m"),
               InfrastructureError);
  EXPECT_THROW(executor.Run("code", "# expect * * WRONGID\n", "m"),
               InfrastructureError);
  // The executor stays usable afterwards.
  EXPECT_EQ(executor.Run("code", "", "m").status, Status::kPass);
}

TEST(ProcessExecutorTest, MissingRunnerCannotStart) {
  EXPECT_THROW(ProcessExecutor({"/nonexistent/mist-runner"}, Quick()),
               InfrastructureError);
  EXPECT_THROW(ProcessExecutor({"mist-runner-that-does-not-exist"}, Quick()),
               InfrastructureError);
  EXPECT_THROW(ProcessExecutor({}, Quick()), InfrastructureError);
}

TEST(ProcessExecutorTest, BatchRunsInOneProcess) {
  ProcessExecutor executor = FakeExecutor();
  auto verdicts = executor.RunBatch("code", "# expect * * PID\n",
                                    {"a", "b", "c", "d"});
  std::set<std::string> pids;
  for (const Verdict& v : verdicts) pids.insert(v.detail);
  EXPECT_EQ(pids.size(), 1u);
}

TEST(ProcessExecutorTest, ParallelScheduleMatchesSequential) {
  std::vector<std::string> codes;
  for (int i = 0; i < 12; ++i) codes.push_back("variant M" + std::to_string(i));
  const std::string tests =
      "# expect T.a M3 FAIL\n# expect T.b M7 ERROR\n# expect T.a M1 ERROR\n"
      "# expect T.c * PASS 0.01\n";
  std::vector<Batch> batches;
  for (const std::string& code : codes) {
    batches.push_back(Batch{&code, &tests, {"T.a", "T.b", "T.c"}});
  }
  ProcessExecutor serial = FakeExecutor(Quick(2.0, 1));
  ProcessExecutor parallel = FakeExecutor(Quick(2.0, 4));
  auto a = RunBatches(serial, batches, 1);
  std::vector<Batch> reversed(batches.rbegin(), batches.rend());
  auto b = RunBatches(parallel, reversed, 4);
  for (std::size_t i = 0; i < codes.size(); ++i) {
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_EQ(a[i][k].status, b[codes.size() - 1 - i][k].status);
    }
  }
  EXPECT_LE(parallel.spawned(), 4);
}

TEST(KillMatrixTest, NoMutantsTwoPassingTests) {
  ProcessExecutor executor = FakeExecutor();
  const std::string tests =
      "import unittest\nclass T(unittest.TestCase):\n"
      "    def test_a(self): pass\n    def test_b(self): pass\n";
  KillMatrix m = BuildKillMatrix("src", {}, tests, executor);
  EXPECT_EQ(m.tests.size(), 2u);
  EXPECT_TRUE(m.mutants.empty());
  ASSERT_EQ(m.grid.size(), 2u);
  EXPECT_TRUE(m.grid[0].empty());
  for (const Verdict& v : m.source_verdicts) EXPECT_EQ(v.status, Status::kPass);
}

TEST(KillMatrixTest, KillsAndNotEvaluatedRows) {
  ProcessExecutor executor = FakeExecutor();
  std::vector<Mutant> mutants = {MakeMutant("m1", "code M1"),
                                 MakeMutant("m2", "code M2"),
                                 MakeMutant("m3", "code M3", 2.0)};
  KillMatrix m = BuildKillMatrix("canonical", mutants, kSuite, executor, 2);
  ASSERT_EQ(m.tests, (std::vector<std::string>{"T.test_a", "T.test_b",
                                               "T.test_c"}));
  EXPECT_EQ(m.source_verdicts[2].status, Status::kFail);
  EXPECT_TRUE(m.Kills(0, 0));
  EXPECT_FALSE(m.Kills(0, 1));
  EXPECT_TRUE(m.Kills(1, 1));
  EXPECT_FALSE(m.Kills(1, 2));
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_FALSE(m.grid[2][k].has_value());
    EXPECT_FALSE(m.Kills(2, k));
  }
  EXPECT_EQ(m.weights, (std::vector<double>{1.0, 1.0, 2.0}));
}

TEST(KillMatrixTest, AddingATestNeverRemovesKills) {
  ProcessExecutor executor = FakeExecutor();
  std::vector<Mutant> mutants = {MakeMutant("m1", "code M1"),
                                 MakeMutant("m2", "code M2")};
  std::string small =
      "import unittest\n# expect T.test_a M1 FAIL\n"
      "class T(unittest.TestCase):\n    def test_a(self): pass\n";
  std::string large = small + "    def test_b(self): pass\n"
                              "# expect T.test_b M2 FAIL\n";
  KillMatrix a = BuildKillMatrix("src", mutants, small, executor);
  KillMatrix b = BuildKillMatrix("src", mutants, large, executor);
  for (std::size_t t = 0; t < a.tests.size(); ++t) {
    for (std::size_t k = 0; k < mutants.size(); ++k) {
      if (a.Kills(t, k)) EXPECT_TRUE(b.Kills(b.TestIndex(a.tests[t]), k));
    }
  }
  EXPECT_TRUE(b.Kills(1, 1));
}

TEST(PrefilterTest, Examples) {
  ProcessExecutor executor = FakeExecutor();
  std::vector<Mutant> mutants = {
      MakeMutant("zero_to_one", "def f(x):\n    return 1\n"),
      MakeMutant("other", "def g(x):\n    return x\n")};
  EXPECT_EQ(PrefilterVulnerable("src", mutants, std::nullopt, executor),
            mutants);
  // The fake runner cannot evaluate f(0); the kill observed by running the
  // smoke test against the 0 -> 1 mutant is scripted on a marker comment.
  const std::string tests =
      "import unittest\n"
      "# expect S.test_zero def_f_marker FAIL\n"
      "class S(unittest.TestCase):\n"
      "    def test_zero(self):\n        self.assertTrue(f(0) == 0)\n";
  mutants[0].mutated_source += "# def_f_marker\n";
  auto vulnerable = PrefilterVulnerable("src", mutants, tests, executor);
  ASSERT_EQ(vulnerable.size(), 1u);
  EXPECT_EQ(vulnerable[0].id, "zero_to_one");
}

TEST(KillMatrixCsvTest, RoundTrip) {
  ProcessExecutor executor = FakeExecutor();
  std::vector<Mutant> mutants = {MakeMutant("m1", "code M1"),
                                 MakeMutant("m,2", "code M2")};
  KillMatrix m = BuildKillMatrix("canonical", mutants, kSuite, executor);
  std::string csv = KillMatrixToCsv(m);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "test_id,mutant_id,status,duration_s");
  EXPECT_NE(csv.find("\"m,2\""), std::string::npos);
  EXPECT_NE(csv.find("T.test_c,m1,NOT_EVALUATED,\n"), std::string::npos);
  KillMatrix back = KillMatrixFromCsv(csv);
  EXPECT_EQ(back.tests, m.tests);
  EXPECT_EQ(back.mutants, m.mutants);
  for (std::size_t t = 0; t < m.tests.size(); ++t) {
    EXPECT_EQ(back.source_verdicts[t].status, m.source_verdicts[t].status);
    for (std::size_t k = 0; k < m.mutants.size(); ++k) {
      EXPECT_EQ(back.Kills(t, k), m.Kills(t, k));
    }
  }
  EXPECT_EQ(KillMatrixToCsv(back), csv);
}

TEST(KillMatrixCsvTest, RejectsMalformedInput) {
  EXPECT_THROW(KillMatrixFromCsv("a,b,c\n"), DomainError);
  EXPECT_THROW(KillMatrixFromCsv("test_id,mutant_id,status,duration_s\nt,m,PASS\n"),
               DomainError);
  EXPECT_THROW(
      KillMatrixFromCsv("test_id,mutant_id,status,duration_s\nt,m,PASS,0\n"),
      DomainError);  // no source row for t
  EXPECT_THROW(
      KillMatrixFromCsv("test_id,mutant_id,status,duration_s\nt,,WHAT,0\n"),
      DomainError);
}

TEST(ReplayExecutorTest, AnswersRecordedVerdicts) {
  ReplayExecutor replay;
  replay.Record("src", "T.a", {Status::kPass, 0.0, ""});
  replay.Record("mut", "T.a", {Status::kFail, 0.0, "x"});
  EXPECT_EQ(replay.Run("src", "", "T.a").status, Status::kPass);
  EXPECT_EQ(replay.Run("mut", "", "T.a").status, Status::kFail);
  EXPECT_THROW(replay.Run("other", "", "T.a"), InfrastructureError);
  EXPECT_EQ(replay.calls(), 2u);
}

}  // namespace
}  // namespace mist
