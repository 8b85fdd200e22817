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

#include "mist/python/lexer.h"

#include <array>
#include <string>

#include <fmt/format.h>

#include "mist/errors.h"

namespace mist::py {
namespace {

constexpr std::array<std::string_view, 35> kKeywords = {
    "False",  "None",   "True",    "and",      "as",       "assert", "async",
    "await",  "break",  "class",   "continue", "def",      "del",    "elif",
    "else",   "except", "finally", "for",      "from",     "global", "if",
    "import", "in",     "is",      "lambda",   "nonlocal", "not",    "or",
    "pass",   "raise",  "return",  "try",      "while",    "with",   "yield"};

constexpr std::array<std::string_view, 5> kThreeCharOps = {"**=", "//=", ">>=",
                                                           "<<=", "..."};
constexpr std::array<std::string_view, 22> kTwoCharOps = {
    "!=", "%=", "&=", "**", "*=", "+=", "-=", "->", "//", "/=", ":=",
    "<<", "<=", "==", ">=", ">>", "@=", "^=", "|=", "<>", "!=", "=="};
constexpr std::string_view kOneCharOps = "%&()*+,-./:;<=>@[]^{|}~";

bool IsIdentStart(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c >= 0x80;
}

bool IsIdentChar(unsigned char c) {
  return IsIdentStart(c) || (c >= '0' && c <= '9');
}

bool IsStringPrefix(std::string_view word) {
  if (word.size() > 2) return false;
  std::string lower;
  for (char c : word) lower.push_back(static_cast<char>(c | 0x20));
  return lower == "r" || lower == "u" || lower == "f" || lower == "b" ||
         lower == "br" || lower == "rb" || lower == "fr" || lower == "rf";
}

class Lexer {
 public:
  Lexer(std::string_view src, LexOptions options)
      : src_(src), options_(options), line_(options.first_line) {
    if (src_.substr(0, 3) == "\xEF\xBB\xBF") {
      pos_ = 3;
      line_start_ = 3;
    }
  }

  std::vector<Token> Run() {
    while (true) {
      if (at_bol_ && brackets_.empty() && !options_.bracketed) {
        if (!HandleIndentation()) break;
      }
      SkipBlanks();
      if (AtEnd()) break;
      char c = src_[pos_];
      if (c == '#') {
        while (!AtEnd() && src_[pos_] != '\n' && src_[pos_] != '\r') ++pos_;
        continue;
      }
      if (c == '\n' || c == '\r') {
        if (brackets_.empty() && !options_.bracketed && line_has_tokens_) {
          Emit(TokenKind::kNewline, pos_, pos_ + 1);
          line_has_tokens_ = false;
        }
        ConsumeNewline();
        at_bol_ = brackets_.empty();
        continue;
      }
      if (c == '\\') {
        std::size_t next = pos_ + 1;
        if (next >= src_.size()) {
          Fail("unexpected EOF while parsing", line_, Col(pos_));
        }
        if (src_[next] != '\n' && src_[next] != '\r') {
          Fail("unexpected character after line continuation character",
               line_, Col(pos_));
        }
        pos_ = next;
        ConsumeNewline();
        if (AtEnd()) Fail("unexpected EOF while parsing", line_, Col(pos_));
        continue;
      }
      auto uc = static_cast<unsigned char>(c);
      if (IsIdentStart(uc)) {
        LexNameOrString();
        continue;
      }
      if ((c >= '0' && c <= '9') ||
          (c == '.' && pos_ + 1 < src_.size() && src_[pos_ + 1] >= '0' &&
           src_[pos_ + 1] <= '9')) {
        LexNumber();
        continue;
      }
      if (c == '\'' || c == '"') {
        LexString(pos_, pos_);
        continue;
      }
      LexOperator();
    }
    Finish();
    return std::move(tokens_);
  }

 private:
  bool AtEnd() const { return pos_ >= src_.size(); }

  int Col(std::size_t pos) const {
    int col = static_cast<int>(pos - line_start_);
    if (line_ == options_.first_line) col += options_.first_col;
    return col;
  }

  [[noreturn]] void Fail(const std::string& message, int line, int col) {
    throw SyntaxError(message, line, col);
  }

  void Emit(TokenKind kind, std::size_t start, std::size_t end) {
    Emit(kind, start, end, line_, Col(start));
  }

  void Emit(TokenKind kind, std::size_t start, std::size_t end, int line,
            int col) {
    Token token{kind, src_.substr(start, end - start), line, col, line_,
                Col(end)};
    if (kind == TokenKind::kNewline || kind == TokenKind::kIndent ||
        kind == TokenKind::kDedent || kind == TokenKind::kEndMarker) {
      token.text = {};
    } else {
      line_has_tokens_ = true;
    }
    tokens_.push_back(token);
  }

  void ConsumeNewline() {
    if (src_[pos_] == '\r' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '\n') {
      ++pos_;
    }
    ++pos_;
    ++line_;
    line_start_ = pos_;
  }

  void SkipBlanks() {
    while (!AtEnd() &&
           (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\f')) {
      ++pos_;
    }
  }

  // Returns false at end of input.
  bool HandleIndentation() {
    while (true) {
      int col = 0;
      int altcol = 0;
      while (!AtEnd()) {
        char c = src_[pos_];
        if (c == ' ') {
          ++col;
          ++altcol;
        } else if (c == '\t') {
          col = (col / 8 + 1) * 8;
          ++altcol;
        } else if (c == '\f') {
          col = altcol = 0;
        } else {
          break;
        }
        ++pos_;
      }
      if (AtEnd()) return false;
      char c = src_[pos_];
      if (c == '#') {
        while (!AtEnd() && src_[pos_] != '\n' && src_[pos_] != '\r') ++pos_;
        if (AtEnd()) return false;
        ConsumeNewline();
        continue;
      }
      if (c == '\n' || c == '\r') {
        ConsumeNewline();
        continue;
      }
      if (c == '\\' && pos_ + 1 < src_.size() &&
          (src_[pos_ + 1] == '\n' || src_[pos_ + 1] == '\r')) {
        // A continuation at line start belongs to the logical line that
        // follows; indentation is still measured here.
      }
      at_bol_ = false;
      if (col == indents_.back()) {
        if (altcol != alt_indents_.back()) {
          Fail("inconsistent use of tabs and spaces in indentation", line_,
               Col(pos_));
        }
      } else if (col > indents_.back()) {
        if (altcol <= alt_indents_.back()) {
          Fail("inconsistent use of tabs and spaces in indentation", line_,
               Col(pos_));
        }
        indents_.push_back(col);
        alt_indents_.push_back(altcol);
        Emit(TokenKind::kIndent, pos_, pos_);
      } else {
        while (indents_.size() > 1 && col < indents_.back()) {
          indents_.pop_back();
          alt_indents_.pop_back();
          Emit(TokenKind::kDedent, pos_, pos_);
        }
        if (col != indents_.back()) {
          Fail("unindent does not match any outer indentation level", line_,
               Col(pos_));
        }
        if (altcol != alt_indents_.back()) {
          Fail("inconsistent use of tabs and spaces in indentation", line_,
               Col(pos_));
        }
      }
      return true;
    }
  }

  void LexNameOrString() {
    std::size_t start = pos_;
    while (!AtEnd() && IsIdentChar(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
    std::string_view word = src_.substr(start, pos_ - start);
    if (!AtEnd() && (src_[pos_] == '\'' || src_[pos_] == '"') &&
        IsStringPrefix(word)) {
      LexString(start, pos_);
      return;
    }
    Emit(TokenKind::kName, start, pos_);
  }

  void LexString(std::size_t start, std::size_t quote_pos) {
    int start_line = line_;
    int start_col = Col(start);
    char quote = src_[quote_pos];
    bool triple = quote_pos + 2 < src_.size() && src_[quote_pos + 1] == quote &&
                  src_[quote_pos + 2] == quote;
    pos_ = quote_pos + (triple ? 3 : 1);
    while (true) {
      if (AtEnd()) {
        if (triple) {
          Fail(fmt::format("unterminated triple-quoted string literal "
                           "(detected at line {})",
                           line_),
               start_line, start_col);
        }
        Fail(fmt::format("unterminated string literal (detected at line {})",
                         line_),
             start_line, start_col);
      }
      char c = src_[pos_];
      if (c == '\\') {
        ++pos_;
        if (AtEnd()) continue;
        if (src_[pos_] == '\n' || src_[pos_] == '\r') {
          ConsumeNewline();
        } else {
          ++pos_;
        }
        continue;
      }
      if (c == '\n' || c == '\r') {
        if (!triple) {
          Fail(fmt::format("unterminated string literal (detected at line {})",
                           line_),
               start_line, start_col);
        }
        ConsumeNewline();
        continue;
      }
      if (c == quote) {
        if (!triple) {
          ++pos_;
          break;
        }
        if (pos_ + 2 < src_.size() && src_[pos_ + 1] == quote &&
            src_[pos_ + 2] == quote) {
          pos_ += 3;
          break;
        }
      }
      ++pos_;
    }
    Token token{TokenKind::kString, src_.substr(start, pos_ - start),
                start_line, start_col, line_, Col(pos_)};
    tokens_.push_back(token);
    line_has_tokens_ = true;
  }

  // Consumes digit ('_'? digit)*; returns false on a misplaced underscore.
  bool Digits(bool (*is_digit)(char)) {
    if (AtEnd() || !is_digit(src_[pos_])) return false;
    while (!AtEnd()) {
      if (is_digit(src_[pos_])) {
        ++pos_;
      } else if (src_[pos_] == '_') {
        if (pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1])) {
          ++pos_;
        } else {
          return false;
        }
      } else {
        break;
      }
    }
    return true;
  }

  static bool IsDec(char c) { return c >= '0' && c <= '9'; }
  static bool IsHex(char c) {
    return IsDec(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
  }
  static bool IsOct(char c) { return c >= '0' && c <= '7'; }
  static bool IsBin(char c) { return c == '0' || c == '1'; }

  void VerifyEndOfNumber(std::size_t start, const char* kind) {
    if (AtEnd()) return;
    auto c = static_cast<unsigned char>(src_[pos_]);
    if (!IsIdentChar(c)) return;
    // CPython 3.10 accepts (with a warning) keywords glued to numbers.
    for (std::string_view kw : {"and", "else", "for", "if", "in", "is",
                                "not", "or"}) {
      if (src_.substr(pos_, kw.size()) == kw) return;
    }
    Fail(fmt::format("invalid {} literal", kind), line_, Col(start));
  }

  void LexNumber() {
    std::size_t start = pos_;
    auto bad = [&](const char* kind) {
      Fail(fmt::format("invalid {} literal", kind), line_, Col(start));
    };
    if (src_[pos_] == '0' && pos_ + 1 < src_.size() &&
        std::string_view("xXoObB").find(src_[pos_ + 1]) !=
            std::string_view::npos) {
      char base = static_cast<char>(src_[pos_ + 1] | 0x20);
      pos_ += 2;
      if (!AtEnd() && src_[pos_] == '_') ++pos_;
      bool (*pred)(char) = base == 'x' ? IsHex : base == 'o' ? IsOct : IsBin;
      const char* kind = base == 'x'   ? "hexadecimal"
                         : base == 'o' ? "octal"
                                       : "binary";
      if (!Digits(pred)) bad(kind);
      if (!AtEnd() && IsDec(src_[pos_])) bad(kind);
      VerifyEndOfNumber(start, kind);
      Emit(TokenKind::kNumber, start, pos_);
      return;
    }
    bool is_float = false;
    if (src_[pos_] != '.') {
      if (!Digits(IsDec)) bad("decimal");
    }
    if (!AtEnd() && src_[pos_] == '.') {
      is_float = true;
      ++pos_;
      if (!AtEnd() && IsDec(src_[pos_])) {
        if (!Digits(IsDec)) bad("decimal");
      }
    }
    if (!AtEnd() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (!AtEnd() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (AtEnd() || !IsDec(src_[pos_])) {
        pos_ = save;
        bad("decimal");
      }
      if (!Digits(IsDec)) bad("decimal");
      is_float = true;
    }
    if (!AtEnd() && (src_[pos_] == 'j' || src_[pos_] == 'J')) {
      ++pos_;
      is_float = true;
    }
    if (!is_float) {
      // Leading zeros are only allowed for zero itself.
      std::string_view text = src_.substr(start, pos_ - start);
      if (text.size() > 1 && text[0] == '0') {
        for (char c : text) {
          if (c != '0' && c != '_') {
            Fail("leading zeros in decimal integer literals are not "
                 "permitted; use an 0o prefix for octal integers",
                 line_, Col(start));
          }
        }
      }
    }
    VerifyEndOfNumber(start, is_float && src_[pos_ - 1] != 'j' &&
                                     src_[pos_ - 1] != 'J'
                                 ? "decimal"
                                 : "decimal");
    Emit(TokenKind::kNumber, start, pos_);
  }

  void LexOperator() {
    std::size_t start = pos_;
    std::string_view rest = src_.substr(pos_);
    for (std::string_view op : kThreeCharOps) {
      if (rest.substr(0, 3) == op) {
        pos_ += 3;
        Emit(TokenKind::kOp, start, pos_);
        return;
      }
    }
    for (std::string_view op : kTwoCharOps) {
      if (rest.substr(0, 2) == op) {
        if (op == "<>") break;
        pos_ += 2;
        Emit(TokenKind::kOp, start, pos_);
        return;
      }
    }
    char c = src_[pos_];
    if (kOneCharOps.find(c) == std::string_view::npos) {
      auto uc = static_cast<unsigned char>(c);
      if (c == '!' || c == '$' || c == '?' || c == '`') {
        Fail("invalid syntax", line_, Col(start));
      }
      Fail(fmt::format("invalid character '\\x{:02x}'", uc), line_,
           Col(start));
    }
    if (c == '(' || c == '[' || c == '{') {
      brackets_.push_back({c, line_, Col(start)});
    } else if (c == ')' || c == ']' || c == '}') {
      if (brackets_.empty()) {
        Fail(fmt::format("unmatched '{}'", c), line_, Col(start));
      }
      char open = brackets_.back().ch;
      char expected = open == '(' ? ')' : open == '[' ? ']' : '}';
      if (c != expected) {
        if (brackets_.back().line != line_) {
          Fail(fmt::format("closing parenthesis '{}' does not match opening "
                           "parenthesis '{}' on line {}",
                           c, open, brackets_.back().line),
               line_, Col(start));
        }
        Fail(fmt::format("closing parenthesis '{}' does not match opening "
                         "parenthesis '{}'",
                         c, open),
             line_, Col(start));
      }
      brackets_.pop_back();
    }
    ++pos_;
    Emit(TokenKind::kOp, start, pos_);
  }

  void Finish() {
    if (!brackets_.empty()) {
      const auto& b = brackets_.back();
      Fail(fmt::format("'{}' was never closed", b.ch), b.line, b.col);
    }
    if (line_has_tokens_ && !options_.bracketed) {
      Emit(TokenKind::kNewline, pos_, pos_);
    }
    if (!options_.bracketed) {
      while (indents_.size() > 1) {
        indents_.pop_back();
        Emit(TokenKind::kDedent, pos_, pos_);
      }
    }
    Emit(TokenKind::kEndMarker, pos_, pos_);
  }

  struct Bracket {
    char ch;
    int line;
    int col;
  };

  std::string_view src_;
  LexOptions options_;
  std::size_t pos_ = 0;
  std::size_t line_start_ = 0;
  int line_;
  bool at_bol_ = true;
  bool line_has_tokens_ = false;
  std::vector<int> indents_{0};
  std::vector<int> alt_indents_{0};
  std::vector<Bracket> brackets_;
  std::vector<Token> tokens_;
};

}  // namespace

bool IsKeyword(std::string_view word) {
  for (std::string_view kw : kKeywords) {
    if (kw == word) return true;
  }
  return false;
}

std::vector<Token> Tokenize(std::string_view source, LexOptions options) {
  return Lexer(source, options).Run();
}

}  // namespace mist::py
