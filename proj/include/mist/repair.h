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

#ifndef MIST_REPAIR_H_
#define MIST_REPAIR_H_

#include <string>
#include <string_view>

namespace mist {

inline constexpr int kDefaultMaxBacktrack = 80;

// Body of the first ``` fenced block, language tag dropped. Text without a
// fence comes back unchanged; an unclosed fence runs to the end of input.
std::string ExtractCodeBlock(std::string_view raw);

// Returns `code` when it parses. Otherwise drops trailing lines one at a
// time, up to `max_backtrack` of them, and returns the first prefix that
// parses. Throws RepairFailed with the last syntax diagnostic.
std::string BacktrackRepair(std::string_view code,
                            int max_backtrack = kDefaultMaxBacktrack);

// The test-generation prompt with both placeholders filled in verbatim.
std::string RenderPrompt(std::string_view question, std::string_view solution);

}  // namespace mist

#endif  // MIST_REPAIR_H_
