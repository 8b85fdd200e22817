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

#include "mist/repair.h"

#include <vector>

#include "mist/errors.h"
#include "mist/python/parser.h"

namespace mist {
namespace {

constexpr std::string_view kFence = "```";

constexpr std::string_view kPromptTemplate =
    "Below is a question and it's corresponding code answer. \n"
    "Please write test cases to check the correctness of the code answer. \n"
    "You need to use the unittest library in Python and create a test class "
    "for testing.\n"
    "\n"
    "IMPORTANT: Return ONLY valid Python code in a single ```python ... ``` "
    "code block. \n"
    "Do NOT include any explanations, analysis, or extra text outside the "
    "code block.\n"
    "\n"
    "### question\n"
    "{QUESTION_TEXT}\n"
    "\n"
    "### code solution\n"
    "{SOLUTION_CODE}\n"
    "\n"
    "Please add detailed comments.";

}  // namespace

std::string ExtractCodeBlock(std::string_view raw) {
  std::size_t open = raw.find(kFence);
  if (open == std::string_view::npos) return std::string(raw);
  std::size_t body = open + kFence.size();
  std::size_t newline = raw.find('\n', body);
  std::size_t close = raw.find(kFence, body);
  if (newline != std::string_view::npos &&
      (close == std::string_view::npos || newline < close)) {
    body = newline + 1;
    close = raw.find(kFence, body);
  }
  if (close == std::string_view::npos) return std::string(raw.substr(body));
  return std::string(raw.substr(body, close - body));
}

std::string BacktrackRepair(std::string_view code, int max_backtrack) {
  std::string diagnostic;
  try {
    py::Parse(code);
    return std::string(code);
  } catch (const SyntaxError& e) {
    diagnostic = e.what();
  }
  std::vector<std::string_view> lines;
  for (std::size_t start = 0;;) {
    std::size_t end = code.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(code.substr(start));
      break;
    }
    lines.push_back(code.substr(start, end - start));
    start = end + 1;
  }
  for (int dropped = 1; dropped <= max_backtrack; ++dropped) {
    if (lines.size() <= 1) break;
    lines.pop_back();
    // A prefix of k lines is the input up to the k-th newline.
    std::size_t length = static_cast<std::size_t>(lines.back().data() -
                                                  code.data()) +
                         lines.back().size();
    std::string_view prefix = code.substr(0, length);
    try {
      py::Parse(prefix);
      return std::string(prefix);
    } catch (const SyntaxError& e) {
      diagnostic = e.what();
    }
  }
  throw RepairFailed(diagnostic);
}

std::string RenderPrompt(std::string_view question, std::string_view solution) {
  std::string out(kPromptTemplate);
  auto substitute = [&out](std::string_view key, std::string_view value) {
    std::size_t at = out.find(key);
    out.replace(at, key.size(), value);
    return at + value.size();
  };
  // Solution goes first so a question containing the other placeholder is
  // left intact.
  substitute("{SOLUTION_CODE}", solution);
  substitute("{QUESTION_TEXT}", question);
  return out;
}

}  // namespace mist
