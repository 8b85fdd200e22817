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

#ifndef MIST_ERRORS_H_
#define MIST_ERRORS_H_

#include <stdexcept>
#include <string>

namespace mist {

// Errors caused by the inputs (bad source, empty pools, ...). The CLI maps
// these to exit code 1.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The execution machinery itself failed (runner could not start, protocol
// violation). Never produced by the code under test. CLI exit code 3.
class InfrastructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public DomainError {
 public:
  SyntaxError(const std::string& message, int line, int column)
      : DomainError(message + " (line " + std::to_string(line) + ", column " +
                    std::to_string(column) + ")"),
        message_(message),
        line_(line),
        column_(column) {}

  const std::string& message() const { return message_; }
  // 1-based line of the offending token.
  int line() const { return line_; }
  // 0-based byte column of the offending token.
  int column() const { return column_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

class MissingWeight : public DomainError {
 public:
  explicit MissingWeight(const std::string& mutant_id)
      : DomainError("no weight for killed mutant '" + mutant_id + "'") {}
};

class EmptyGroup : public DomainError {
 public:
  EmptyGroup() : DomainError("advantage group is empty") {}
};

class EmptyMutantPool : public DomainError {
 public:
  EmptyMutantPool()
      : DomainError("mutation score is undefined for an empty mutant pool") {}
};

class DuplicateTest : public DomainError {
 public:
  explicit DuplicateTest(const std::string& test_id)
      : DomainError("test '" + test_id + "' appears more than once") {}
};

class RepairFailed : public DomainError {
 public:
  explicit RepairFailed(const std::string& diagnostic)
      : DomainError("repair failed: " + diagnostic), diagnostic_(diagnostic) {}

  // The syntax diagnostic of the last prefix that was tried.
  const std::string& diagnostic() const { return diagnostic_; }

 private:
  std::string diagnostic_;
};

}  // namespace mist

#endif  // MIST_ERRORS_H_
