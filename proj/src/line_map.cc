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

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "mist/mutation.h"

namespace mist {
namespace {

std::vector<std::string> SplitLines(std::string_view text) {
  std::vector<std::string> lines;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      lines.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) lines.push_back(std::move(current));
  return lines;
}

enum class Tag { kEqual, kReplace, kDelete, kInsert };

struct Opcode {
  Tag tag;
  int i1, i2, j1, j2;
};

// Opcodes of one longest common subsequence. Matching equal heads first is
// always optimal, so the walk is deterministic.
std::vector<Opcode> LcsOpcodes(const std::vector<std::string>& a,
                               const std::vector<std::string>& b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  int prefix = 0;
  while (prefix < n && prefix < m && a[prefix] == b[prefix]) ++prefix;
  int suffix = 0;
  while (suffix < n - prefix && suffix < m - prefix &&
         a[n - 1 - suffix] == b[m - 1 - suffix]) {
    ++suffix;
  }
  const int rows = n - prefix - suffix;
  const int cols = m - prefix - suffix;

  // suffix_lcs[i][j] = LCS length of a[prefix+i:] and b[prefix+j:] within
  // the trimmed window.
  std::vector<int> table(static_cast<std::size_t>(rows + 1) * (cols + 1), 0);
  auto at = [&](int i, int j) -> int& {
    return table[static_cast<std::size_t>(i) * (cols + 1) + j];
  };
  for (int i = rows - 1; i >= 0; --i) {
    for (int j = cols - 1; j >= 0; --j) {
      at(i, j) = a[prefix + i] == b[prefix + j]
                     ? at(i + 1, j + 1) + 1
                     : std::max(at(i + 1, j), at(i, j + 1));
    }
  }

  std::vector<std::pair<int, int>> matches;
  for (int k = 0; k < prefix; ++k) matches.emplace_back(k, k);
  int i = 0, j = 0;
  while (i < rows && j < cols) {
    if (a[prefix + i] == b[prefix + j]) {
      matches.emplace_back(prefix + i, prefix + j);
      ++i;
      ++j;
    } else if (at(i + 1, j) >= at(i, j + 1)) {
      ++i;
    } else {
      ++j;
    }
  }
  for (int k = 0; k < suffix; ++k) {
    matches.emplace_back(n - suffix + k, m - suffix + k);
  }
  matches.emplace_back(n, m);  // sentinel

  std::vector<Opcode> ops;
  int ai = 0, bj = 0;
  for (auto [mi, mj] : matches) {
    if (ai < mi && bj < mj) {
      ops.push_back({Tag::kReplace, ai, mi, bj, mj});
    } else if (ai < mi) {
      ops.push_back({Tag::kDelete, ai, mi, bj, bj});
    } else if (bj < mj) {
      ops.push_back({Tag::kInsert, ai, ai, bj, mj});
    }
    if (mi < n) {
      if (!ops.empty() && ops.back().tag == Tag::kEqual &&
          ops.back().i2 == mi && ops.back().j2 == mj) {
        ++ops.back().i2;
        ++ops.back().j2;
      } else {
        ops.push_back({Tag::kEqual, mi, mi + 1, mj, mj + 1});
      }
    }
    ai = mi + 1;
    bj = mj + 1;
  }
  return ops;
}

}  // namespace

int MapMutantLine(std::string_view original_text,
                  std::string_view mutated_text, int original_line) {
  std::vector<std::string> a = SplitLines(original_text);
  std::vector<std::string> b = SplitLines(mutated_text);
  const int last = std::max(1, static_cast<int>(b.size()));
  const int target = original_line - 1;
  for (const Opcode& op : LcsOpcodes(a, b)) {
    if (target < op.i1 || target >= op.i2) continue;
    int j = op.j1;
    switch (op.tag) {
      case Tag::kEqual:
        j = op.j1 + (target - op.i1);
        break;
      case Tag::kReplace:
        j = op.j1 + std::min(target - op.i1, op.j2 - op.j1 - 1);
        break;
      case Tag::kDelete:
      case Tag::kInsert:
        break;
    }
    return std::clamp(j + 1, 1, last);
  }
  return std::clamp(original_line, 1, last);
}

}  // namespace mist
