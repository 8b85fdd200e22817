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

#ifndef MIST_PYTHON_PARSER_H_
#define MIST_PYTHON_PARSER_H_

#include <string_view>

#include "mist/python/ast.h"

namespace mist::py {

// Parses a Python 3.10 module (the `match` statement excepted) into a
// Module node. Throws SyntaxError.
NodePtr Parse(std::string_view source);

// True when Parse would succeed.
bool Parses(std::string_view source);

}  // namespace mist::py

#endif  // MIST_PYTHON_PARSER_H_
