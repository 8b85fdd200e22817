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

#ifndef MIST_PYTHON_LEXER_H_
#define MIST_PYTHON_LEXER_H_

#include <string_view>
#include <vector>

namespace mist::py {

enum class TokenKind {
  kName,
  kNumber,
  kString,
  kOp,
  kNewline,
  kIndent,
  kDedent,
  kEndMarker,
};

struct Token {
  TokenKind kind;
  // View into the tokenized source; empty for layout tokens.
  std::string_view text;
  int line;
  int col;
  int end_line;
  int end_col;
};

struct LexOptions {
  // Position of the first byte, for sub-expressions of f-strings.
  int first_line = 1;
  int first_col = 0;
  // Treat the whole input as if enclosed in brackets: no NEWLINE, INDENT
  // or DEDENT tokens are produced.
  bool bracketed = false;
};

// Tokenizes Python 3.10 source. Throws SyntaxError on lexical errors,
// unbalanced brackets and inconsistent indentation. The returned tokens
// reference `source`, which must outlive them.
std::vector<Token> Tokenize(std::string_view source, LexOptions options = {});

bool IsKeyword(std::string_view word);

}  // namespace mist::py

#endif  // MIST_PYTHON_LEXER_H_
