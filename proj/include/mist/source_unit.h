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

#ifndef MIST_SOURCE_UNIT_H_
#define MIST_SOURCE_UNIT_H_

#include <memory>
#include <string>

#include "mist/python/ast.h"

namespace mist {

// One parsed subject file. Immutable once built; node spans live on the
// tree itself.
struct SourceUnit {
  std::string text;
  std::shared_ptr<const py::Node> tree;
};

// Throws SyntaxError.
SourceUnit ParseSource(std::string text);

}  // namespace mist

#endif  // MIST_SOURCE_UNIT_H_
