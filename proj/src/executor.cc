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

#include "mist/executor.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/socket.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <exception>
#include <filesystem>
#include <thread>

#include <fmt/format.h>

#include "mist/errors.h"

namespace mist {

int Limits::EffectiveWorkers() const {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::vector<Verdict>> RunBatches(TestExecutor& executor,
                                             const std::vector<Batch>& batches,
                                             int workers) {
  std::vector<std::vector<Verdict>> results(batches.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mu;
  std::exception_ptr error;
  auto work = [&] {
    for (std::size_t i = next++; i < batches.size(); i = next++) {
      {
        std::lock_guard lock(error_mu);
        if (error) return;
      }
      try {
        const Batch& b = batches[i];
        results[i] = executor.RunBatch(*b.code, *b.tests, b.methods);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::size_t threads = std::min<std::size_t>(std::max(1, workers),
                                              batches.size());
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return results;
}

namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string ResolveExecutable(const std::string& name) {
  namespace fs = std::filesystem;
  auto runnable = [](const fs::path& p) {
    return ::access(p.c_str(), X_OK) == 0 && !fs::is_directory(p);
  };
  if (name.find('/') != std::string::npos) {
    if (runnable(name)) return name;
    throw InfrastructureError(fmt::format("runner '{}' is not executable", name));
  }
  const char* path = std::getenv("PATH");
  std::string_view dirs = path ? path : "/usr/local/bin:/usr/bin:/bin";
  while (!dirs.empty()) {
    std::size_t colon = dirs.find(':');
    std::string_view dir = dirs.substr(0, colon);
    fs::path candidate = fs::path(dir.empty() ? "." : std::string(dir)) / name;
    if (runnable(candidate)) return candidate.string();
    if (colon == std::string_view::npos) break;
    dirs.remove_prefix(colon + 1);
  }
  throw InfrastructureError(fmt::format("runner '{}' not found on PATH", name));
}

}  // namespace

struct ProcessExecutor::Runner {
  pid_t pid = -1;
  int fd = -1;
  std::string buffer;

  void Kill() {
    if (fd >= 0) ::close(fd);
    fd = -1;
    if (pid > 0) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      while (::waitpid(pid, nullptr, 0) < 0 && errno == EINTR) {
      }
    }
    pid = -1;
  }

  // Closes the channel and gives the runner a moment to exit on its own.
  void Shutdown() {
    if (fd >= 0) ::close(fd);
    fd = -1;
    if (pid <= 0) return;
    auto start = Clock::now();
    while (SecondsSince(start) < 1.0) {
      if (::waitpid(pid, nullptr, WNOHANG) == pid) {
        pid = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    Kill();
  }
};

ProcessExecutor::ProcessExecutor(std::vector<std::string> argv, Limits limits)
    : argv_(std::move(argv)), limits_(limits) {
  if (argv_.empty()) throw InfrastructureError("empty runner command");
  executable_ = ResolveExecutable(argv_[0]);
}

ProcessExecutor::~ProcessExecutor() {
  for (auto& runner : idle_) runner->Shutdown();
}

std::unique_ptr<ProcessExecutor::Runner> ProcessExecutor::Spawn() {
  int sv[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
    throw InfrastructureError(fmt::format("socketpair: {}", std::strerror(errno)));
  }
  int status_pipe[2];
  if (::pipe2(status_pipe, O_CLOEXEC) != 0) {
    ::close(sv[0]);
    ::close(sv[1]);
    throw InfrastructureError(fmt::format("pipe: {}", std::strerror(errno)));
  }
  int devnull = ::open("/dev/null", O_WRONLY | O_CLOEXEC);

  std::vector<char*> args;
  for (std::string& a : argv_) args.push_back(a.data());
  args.push_back(nullptr);
  rlim_t memory = limits_.memory_mb
                      ? static_cast<rlim_t>(*limits_.memory_mb) << 20
                      : RLIM_INFINITY;

  pid_t pid = ::fork();
  if (pid == 0) {
    // Only async-signal-safe calls until exec.
    ::setpgid(0, 0);
    ::dup2(sv[1], STDIN_FILENO);
    ::dup2(sv[1], STDOUT_FILENO);
    if (devnull >= 0) ::dup2(devnull, STDERR_FILENO);
    if (memory != RLIM_INFINITY) {
      struct rlimit rl = {memory, memory};
      ::setrlimit(RLIMIT_AS, &rl);
    }
    ::execv(executable_.c_str(), args.data());
    int err = errno;
    ssize_t ignored = ::write(status_pipe[1], &err, sizeof err);
    (void)ignored;
    ::_exit(127);
  }
  int fork_errno = errno;
  ::close(sv[1]);
  ::close(status_pipe[1]);
  if (devnull >= 0) ::close(devnull);
  if (pid < 0) {
    ::close(sv[0]);
    ::close(status_pipe[0]);
    throw InfrastructureError(fmt::format("fork: {}", std::strerror(fork_errno)));
  }
  ::setpgid(pid, pid);

  int exec_errno = 0;
  ssize_t n;
  do {
    n = ::read(status_pipe[0], &exec_errno, sizeof exec_errno);
  } while (n < 0 && errno == EINTR);
  ::close(status_pipe[0]);
  if (n == sizeof exec_errno) {
    ::close(sv[0]);
    ::waitpid(pid, nullptr, 0);
    throw InfrastructureError(fmt::format("cannot start runner '{}': {}",
                                          executable_,
                                          std::strerror(exec_errno)));
  }
  ::fcntl(sv[0], F_SETFL, ::fcntl(sv[0], F_GETFL) | O_NONBLOCK);
  auto runner = std::make_unique<Runner>();
  runner->pid = pid;
  runner->fd = sv[0];
  ++spawned_;
  return runner;
}

std::unique_ptr<ProcessExecutor::Runner> ProcessExecutor::Acquire() {
  std::unique_lock lock(mu_);
  const int capacity = limits_.EffectiveWorkers();
  cv_.wait(lock, [&] { return busy_ < capacity; });
  ++busy_;
  if (!idle_.empty()) {
    auto runner = std::move(idle_.back());
    idle_.pop_back();
    return runner;
  }
  lock.unlock();
  try {
    return Spawn();
  } catch (...) {
    lock.lock();
    --busy_;
    cv_.notify_one();
    throw;
  }
}

void ProcessExecutor::Release(std::unique_ptr<Runner> runner) {
  std::lock_guard lock(mu_);
  if (runner && runner->pid > 0) idle_.push_back(std::move(runner));
  --busy_;
  cv_.notify_one();
}

Verdict ProcessExecutor::Exchange(std::unique_ptr<Runner>& runner,
                                  const JobRequest& request) {
  const double limit = request.timeout_s;
  const auto start = Clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(limit + kTimeoutGraceSeconds));
  auto remaining_ms = [&] {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    return static_cast<int>(std::max<long long>(0, left.count()));
  };
  auto timed_out = [&] {
    runner->Kill();
    return Verdict{Status::kTimeout, std::max(SecondsSince(start), limit),
                   "killed after timeout grace"};
  };
  auto vanished = [&] {
    runner->Kill();
    return Verdict{Status::kError, SecondsSince(start),
                   "runner exited without answering"};
  };

  std::string line = EncodeRequest(request) + "\n";
  std::size_t sent = 0;
  while (sent < line.size()) {
    ssize_t n = ::send(runner->fd, line.data() + sent, line.size() - sent,
                       MSG_NOSIGNAL);
    if (n > 0) {
      sent += static_cast<std::size_t>(n);
      continue;
    }
    if (n < 0 && errno == EINTR) continue;
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
      pollfd p{runner->fd, POLLOUT, 0};
      int ms = remaining_ms();
      if (ms == 0 || ::poll(&p, 1, ms) == 0) return timed_out();
      continue;
    }
    return vanished();
  }

  for (;;) {
    std::size_t newline = runner->buffer.find('\n');
    if (newline != std::string::npos) {
      std::string reply = runner->buffer.substr(0, newline);
      runner->buffer.erase(0, newline + 1);
      JobResponse response;
      try {
        response = DecodeResponse(reply);
      } catch (...) {
        runner->Kill();
        throw;
      }
      if (response.job_id != request.job_id) {
        runner->Kill();
        throw InfrastructureError(
            fmt::format("runner answered job '{}' while '{}' was pending",
                        response.job_id, request.job_id));
      }
      return Normalize(std::move(response.verdict), limit);
    }
    pollfd p{runner->fd, POLLIN, 0};
    int ms = remaining_ms();
    int ready = ms == 0 ? 0 : ::poll(&p, 1, ms);
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) return timed_out();
    char chunk[65536];
    ssize_t n = ::read(runner->fd, chunk, sizeof chunk);
    if (n > 0) {
      runner->buffer.append(chunk, static_cast<std::size_t>(n));
    } else if (n == 0) {
      return vanished();
    } else if (errno != EINTR && errno != EAGAIN) {
      return vanished();
    }
  }
}

std::vector<Verdict> ProcessExecutor::RunBatch(
    const std::string& code, const std::string& tests,
    const std::vector<std::string>& methods) {
  std::vector<Verdict> verdicts;
  verdicts.reserve(methods.size());
  std::unique_ptr<Runner> runner = Acquire();
  try {
    for (const std::string& method : methods) {
      if (!runner || runner->pid <= 0) runner = Spawn();
      JobRequest request{fmt::format("{}", next_job_++), code, tests, method,
                         limits_.timeout_s};
      verdicts.push_back(Exchange(runner, request));
    }
  } catch (...) {
    if (runner) runner->Kill();
    Release(nullptr);
    throw;
  }
  Release(std::move(runner));
  return verdicts;
}

void ReplayExecutor::Record(const std::string& code, const std::string& method,
                            Verdict verdict) {
  table_[{code, method}] = std::move(verdict);
}

std::vector<Verdict> ReplayExecutor::RunBatch(
    const std::string& code, const std::string& /*tests*/,
    const std::vector<std::string>& methods) {
  std::vector<Verdict> out;
  for (const std::string& method : methods) {
    auto it = table_.find({code, method});
    if (it == table_.end()) {
      throw InfrastructureError(
          fmt::format("no recorded verdict for method '{}'", method));
    }
    ++calls_;
    out.push_back(it->second);
  }
  return out;
}

}  // namespace mist
