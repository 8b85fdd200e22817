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

#ifndef MIST_EXECUTOR_H_
#define MIST_EXECUTOR_H_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mist/verdict.h"

namespace mist {

struct Limits {
  double timeout_s = 5.0;
  // Address-space cap for runner processes; none when unset.
  std::optional<std::size_t> memory_mb;
  // Concurrent runner processes. Zero means one per logical CPU.
  int workers = 0;

  int EffectiveWorkers() const;
};

// Runs test methods against code variants. Implementations must be safe to
// call from several threads at once.
class TestExecutor {
 public:
  virtual ~TestExecutor() = default;

  // Runs `methods` one after another against a single code variant and
  // returns one verdict per method, in order.
  virtual std::vector<Verdict> RunBatch(const std::string& code,
                                        const std::string& tests,
                                        const std::vector<std::string>& methods) = 0;

  Verdict Run(const std::string& code, const std::string& tests,
              const std::string& method) {
    return RunBatch(code, tests, {method}).front();
  }
};

struct Batch {
  const std::string* code;
  const std::string* tests;
  std::vector<std::string> methods;
};

// Runs independent batches on up to `workers` threads. Results are indexed
// like `batches`, whatever the completion order. The first exception thrown
// by any batch is rethrown after all threads finish.
std::vector<std::vector<Verdict>> RunBatches(TestExecutor& executor,
                                             const std::vector<Batch>& batches,
                                             int workers);

// Speaks the wire protocol with a pool of long-lived runner processes
// started from `argv`. A runner that overruns timeout + grace is killed
// with its whole process group and replaced; so is one that exits without
// answering (its job becomes ERROR).
class ProcessExecutor : public TestExecutor {
 public:
  ProcessExecutor(std::vector<std::string> argv, Limits limits);
  ~ProcessExecutor() override;

  ProcessExecutor(const ProcessExecutor&) = delete;
  ProcessExecutor& operator=(const ProcessExecutor&) = delete;

  std::vector<Verdict> RunBatch(const std::string& code,
                                const std::string& tests,
                                const std::vector<std::string>& methods) override;

  const Limits& limits() const { return limits_; }
  // Runner processes started so far.
  int spawned() const { return spawned_.load(); }

 private:
  struct Runner;

  std::unique_ptr<Runner> Acquire();
  void Release(std::unique_ptr<Runner> runner);
  std::unique_ptr<Runner> Spawn();
  Verdict Exchange(std::unique_ptr<Runner>& runner, const JobRequest& request);

  std::vector<std::string> argv_;
  std::string executable_;
  Limits limits_;
  std::mutex mu_;
  std::condition_variable cv_;
  int busy_ = 0;
  std::vector<std::unique_ptr<Runner>> idle_;
  std::atomic<std::uint64_t> next_job_{0};
  std::atomic<int> spawned_{0};
};

// Answers from recorded verdicts. Code variants are recognized by exact
// text; unknown (variant, method) pairs raise InfrastructureError.
class ReplayExecutor : public TestExecutor {
 public:
  void Record(const std::string& code, const std::string& method,
              Verdict verdict);

  std::vector<Verdict> RunBatch(const std::string& code,
                                const std::string& tests,
                                const std::vector<std::string>& methods) override;

  // Jobs answered so far.
  std::size_t calls() const { return calls_.load(); }

 private:
  std::map<std::pair<std::string, std::string>, Verdict> table_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace mist

#endif  // MIST_EXECUTOR_H_
