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

#include "mist/kill_matrix.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "mist/errors.h"
#include "mist/python/parser.h"

namespace mist {

using py::Node;
using py::NodeKind;

namespace {

std::string BaseName(const Node& base) {
  if (base.kind == NodeKind::kName || base.kind == NodeKind::kAttribute) {
    return base.name;
  }
  return "";
}

}  // namespace

std::vector<std::string> DiscoverTestMethods(std::string_view tests_source) {
  py::NodePtr tree = py::Parse(tests_source);
  std::set<std::string> test_classes;
  std::vector<std::string> methods;
  std::set<std::string> seen;
  for (const auto& stmt : tree->list(py::field::kBody)) {
    if (stmt->kind != NodeKind::kClassDef) continue;
    bool qualifies = false;
    for (const auto& base : stmt->list(py::field::kClassBases)) {
      std::string name = BaseName(*base);
      if (name == "TestCase" || name == "IsolatedAsyncioTestCase" ||
          (base->kind == NodeKind::kName && test_classes.count(name))) {
        qualifies = true;
      }
    }
    if (!qualifies) continue;
    test_classes.insert(stmt->name);
    for (const auto& member : stmt->list(py::field::kClassBody)) {
      if ((member->kind == NodeKind::kFunctionDef ||
           member->kind == NodeKind::kAsyncFunctionDef) &&
          member->name.rfind("test", 0) == 0) {
        std::string id = stmt->name + "." + member->name;
        if (seen.insert(id).second) methods.push_back(std::move(id));
      }
    }
  }
  return methods;
}

std::size_t KillMatrix::TestIndex(std::string_view id) const {
  auto it = std::find(tests.begin(), tests.end(), id);
  if (it == tests.end()) {
    throw DomainError(fmt::format("unknown test '{}'", id));
  }
  return static_cast<std::size_t>(it - tests.begin());
}

std::size_t KillMatrix::MutantIndex(std::string_view id) const {
  auto it = std::find(mutants.begin(), mutants.end(), id);
  if (it == mutants.end()) {
    throw DomainError(fmt::format("unknown mutant '{}'", id));
  }
  return static_cast<std::size_t>(it - mutants.begin());
}

KillMatrix BuildKillMatrix(const std::string& source,
                           const std::vector<Mutant>& mutants,
                           const std::string& test_module,
                           TestExecutor& executor, int workers) {
  KillMatrix matrix;
  matrix.tests = DiscoverTestMethods(test_module);
  for (const Mutant& m : mutants) {
    matrix.mutants.push_back(m.id);
    matrix.weights.push_back(m.weight);
  }
  matrix.grid.assign(matrix.tests.size(),
                     std::vector<std::optional<Verdict>>(mutants.size()));
  if (matrix.tests.empty()) return matrix;

  matrix.source_verdicts = executor.RunBatch(source, test_module, matrix.tests);

  std::vector<std::size_t> passing;
  std::vector<std::string> passing_ids;
  for (std::size_t t = 0; t < matrix.tests.size(); ++t) {
    if (matrix.source_verdicts[t].status == Status::kPass) {
      passing.push_back(t);
      passing_ids.push_back(matrix.tests[t]);
    }
  }
  if (passing.empty() || mutants.empty()) return matrix;

  std::vector<Batch> batches;
  batches.reserve(mutants.size());
  for (const Mutant& m : mutants) {
    batches.push_back(Batch{&m.mutated_source, &test_module, passing_ids});
  }
  auto results = RunBatches(executor, batches, workers);
  for (std::size_t m = 0; m < mutants.size(); ++m) {
    for (std::size_t k = 0; k < passing.size(); ++k) {
      matrix.grid[passing[k]][m] = results[m][k];
    }
  }
  return matrix;
}

std::vector<Mutant> PrefilterVulnerable(
    const std::string& source, const std::vector<Mutant>& mutants,
    const std::optional<std::string>& smoke_tests, TestExecutor& executor,
    int workers) {
  if (!smoke_tests) return mutants;
  KillMatrix matrix =
      BuildKillMatrix(source, mutants, *smoke_tests, executor, workers);
  std::vector<Mutant> vulnerable;
  for (std::size_t m = 0; m < mutants.size(); ++m) {
    for (std::size_t t = 0; t < matrix.tests.size(); ++t) {
      if (matrix.Kills(t, m)) {
        vulnerable.push_back(mutants[m]);
        break;
      }
    }
  }
  return vulnerable;
}

namespace {

constexpr std::string_view kCsvHeader = "test_id,mutant_id,status,duration_s";
constexpr std::string_view kNotEvaluated = "NOT_EVALUATED";

std::string CsvField(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(value);
  }
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Splits CSV text into records of fields (RFC 4180 quoting).
std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw DomainError("unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string KillMatrixToCsv(const KillMatrix& matrix) {
  std::string out(kCsvHeader);
  out += '\n';
  for (std::size_t t = 0; t < matrix.tests.size(); ++t) {
    const std::string test = CsvField(matrix.tests[t]);
    if (t < matrix.source_verdicts.size()) {
      const Verdict& v = matrix.source_verdicts[t];
      out += fmt::format("{},,{},{:.6f}\n", test, StatusName(v.status),
                         v.duration);
    }
    for (std::size_t m = 0; m < matrix.mutants.size(); ++m) {
      const auto& cell = matrix.grid[t][m];
      if (cell) {
        out += fmt::format("{},{},{},{:.6f}\n", test,
                           CsvField(matrix.mutants[m]),
                           StatusName(cell->status), cell->duration);
      } else {
        out += fmt::format("{},{},{},\n", test, CsvField(matrix.mutants[m]),
                           kNotEvaluated);
      }
    }
  }
  return out;
}

KillMatrix KillMatrixFromCsv(std::string_view csv) {
  auto rows = ParseCsv(csv);
  if (rows.empty() || rows[0].size() != 4 ||
      fmt::format("{},{},{},{}", rows[0][0], rows[0][1], rows[0][2],
                  rows[0][3]) != kCsvHeader) {
    throw DomainError(
        fmt::format("kill matrix CSV must start with '{}'", kCsvHeader));
  }
  KillMatrix matrix;
  std::map<std::string, std::size_t> test_index;
  std::map<std::string, std::size_t> mutant_index;
  struct Cell {
    std::size_t test;
    std::string mutant;
    std::optional<Verdict> verdict;
  };
  std::vector<Cell> cells;
  std::vector<std::optional<Verdict>> source(0);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 4) {
      throw DomainError(fmt::format("kill matrix CSV row {} has {} fields",
                                    r + 1, row.size()));
    }
    auto [it, inserted] = test_index.emplace(row[0], matrix.tests.size());
    if (inserted) {
      matrix.tests.push_back(row[0]);
      source.emplace_back();
    }
    std::optional<Verdict> verdict;
    if (row[2] != kNotEvaluated) {
      Verdict v;
      v.status = ParseStatus(row[2]);
      try {
        v.duration = row[3].empty() ? 0.0 : std::stod(row[3]);
      } catch (const std::exception&) {
        throw DomainError(fmt::format("bad duration '{}' on CSV row {}",
                                      row[3], r + 1));
      }
      verdict = v;
    }
    if (row[1].empty()) {
      if (!verdict) throw DomainError("source rows must carry a verdict");
      source[it->second] = verdict;
      continue;
    }
    if (mutant_index.emplace(row[1], matrix.mutants.size()).second) {
      matrix.mutants.push_back(row[1]);
    }
    cells.push_back({it->second, row[1], verdict});
  }
  matrix.weights.assign(matrix.mutants.size(), 1.0);
  matrix.grid.assign(matrix.tests.size(), std::vector<std::optional<Verdict>>(
                                              matrix.mutants.size()));
  for (Cell& c : cells) {
    matrix.grid[c.test][mutant_index[c.mutant]] = std::move(c.verdict);
  }
  for (std::size_t t = 0; t < matrix.tests.size(); ++t) {
    if (!source[t]) {
      throw DomainError(fmt::format("no source verdict for test '{}'",
                                    matrix.tests[t]));
    }
    matrix.source_verdicts.push_back(*source[t]);
  }
  return matrix;
}

void ApplyWeights(KillMatrix& matrix, const std::vector<Mutant>& mutants) {
  std::map<std::string, double> by_id;
  for (const Mutant& m : mutants) by_id[m.id] = m.weight;
  for (std::size_t i = 0; i < matrix.mutants.size(); ++i) {
    auto it = by_id.find(matrix.mutants[i]);
    if (it != by_id.end()) matrix.weights[i] = it->second;
  }
}

}  // namespace mist
