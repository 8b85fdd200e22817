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

// Python literal semantics: escape decoding, number parsing and the exact
// `repr()` spellings CPython uses when regenerating source.

#ifndef MIST_PYTHON_LITERALS_H_
#define MIST_PYTHON_LITERALS_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mist/python/ast.h"

namespace mist::py {

// Thrown by the decoders below; the parser attaches a position.
class LiteralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<char32_t> DecodeUtf8(std::string_view text);
void AppendUtf8(char32_t code_point, std::string& out);
std::string EncodeUtf8(const std::vector<char32_t>& code_points);

// Approximation of str.isprintable() for a single code point.
bool IsPrintable(char32_t c);

// `c.encode("unicode_escape")` for one code point.
std::string UnicodeEscape(char32_t c);

// repr() of a str value given as UTF-8.
std::string StrRepr(std::string_view utf8);
// repr() of a bytes value.
std::string BytesRepr(std::string_view bytes);
// repr() of a float ("1.0", "1e+16", "inf", ...).
std::string FloatRepr(double value);
// repr() of any constant (complex numbers as "2j", "(1+2j)" is never
// produced since the parser only yields pure imaginary literals).
std::string ConstantRepr(const Constant& constant);

// Integer literal token ("0x1F", "1_000", ...) to canonical decimal digits.
std::string ParseIntLiteral(std::string_view token);
double ParseFloatLiteral(std::string_view token);

// Decodes the body of a str/bytes literal (text between the quotes).
// For str the result is UTF-8.
std::string DecodeStringBody(std::string_view body, bool raw, bool bytes);

// Decimal-digit arithmetic helpers used by constant replacement.
// Returns the canonical decimal of `digits + delta` where `digits` is a
// non-negative canonical decimal; the result may carry a leading '-'.
std::string AddToDecimal(std::string_view digits, long delta);

}  // namespace mist::py

#endif  // MIST_PYTHON_LITERALS_H_
