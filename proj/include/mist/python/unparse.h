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

#ifndef MIST_PYTHON_UNPARSE_H_
#define MIST_PYTHON_UNPARSE_H_

#include <string>

#include "mist/python/ast.h"

namespace mist::py {

// Regenerates source text exactly as CPython 3.10's `ast.unparse` does:
// canonical spacing, minimal parentheses, comments and blank lines dropped,
// no trailing newline. Throws DomainError for trees that cannot be written
// back (a backslash inside an f-string replacement field).
std::string Unparse(const Node& node);

// Unparses `root` with `replacement` written in place of the subtree at
// address `target`. Neither tree is modified.
std::string UnparseWithSubstitution(const Node& root, const Node* target,
                                    const Node& replacement);

}  // namespace mist::py

#endif  // MIST_PYTHON_UNPARSE_H_
