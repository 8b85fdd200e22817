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

#include "mist/python/literals.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>

namespace mist::py {
namespace {

using boost::multiprecision::cpp_int;

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string StripUnderscores(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (char c : token) {
    if (c != '_') out.push_back(c);
  }
  return out;
}

// Shortest round-trip formatting with CPython's 'r' layout rules.
std::string FormatShortest(double value, bool add_dot_0) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value < 0 ? "-inf" : "inf";

  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value,
                           std::chars_format::scientific);
  std::string sci(buf, res.ptr);
  std::string sign;
  if (!sci.empty() && sci[0] == '-') {
    sign = "-";
    sci.erase(0, 1);
  }
  std::size_t e_pos = sci.find('e');
  std::string mantissa = sci.substr(0, e_pos);
  int exponent = std::stoi(sci.substr(e_pos + 1));
  std::string digits;
  for (char c : mantissa) {
    if (c != '.') digits.push_back(c);
  }
  // value = 0.d1d2d3... * 10^decpt
  int decpt = exponent + 1;
  if (digits == "0") decpt = 1;

  std::string out = sign;
  if (decpt <= -4 || decpt > 16) {
    out += digits[0];
    if (digits.size() > 1) {
      out += '.';
      out += digits.substr(1);
    }
    int e = decpt - 1;
    out += fmt::format("e{}{:02d}", e < 0 ? '-' : '+', std::abs(e));
    return out;
  }
  if (decpt <= 0) {
    out += "0.";
    out.append(static_cast<std::size_t>(-decpt), '0');
    out += digits;
    return out;
  }
  if (static_cast<std::size_t>(decpt) >= digits.size()) {
    out += digits;
    out.append(static_cast<std::size_t>(decpt) - digits.size(), '0');
    if (add_dot_0) out += ".0";
    return out;
  }
  out += digits.substr(0, static_cast<std::size_t>(decpt));
  out += '.';
  out += digits.substr(static_cast<std::size_t>(decpt));
  return out;
}

}  // namespace

std::vector<char32_t> DecodeUtf8(std::string_view text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    auto b = static_cast<unsigned char>(text[i]);
    int extra = 0;
    char32_t cp = b;
    if (b >= 0xF0 && b < 0xF8) {
      extra = 3;
      cp = b & 0x07;
    } else if (b >= 0xE0) {
      extra = b < 0xF0 ? 2 : 0;
      cp = b & 0x0F;
    } else if (b >= 0xC0) {
      extra = 1;
      cp = b & 0x1F;
    }
    if (b >= 0x80 && extra == 0) {
      // Stray continuation or invalid lead byte: keep the byte value.
      out.push_back(b);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      if (i + k >= text.size()) {
        ok = false;
        break;
      }
      auto c = static_cast<unsigned char>(text[i + k]);
      if ((c & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (c & 0x3F);
    }
    if (!ok) {
      out.push_back(b);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(extra) + 1;
  }
  return out;
}

void AppendUtf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string EncodeUtf8(const std::vector<char32_t>& code_points) {
  std::string out;
  out.reserve(code_points.size());
  for (char32_t cp : code_points) AppendUtf8(cp, out);
  return out;
}

bool IsPrintable(char32_t c) {
  if (c < 0x20 || (c >= 0x7F && c <= 0xA0) || c == 0xAD) return false;
  if (c < 0x7F) return true;
  if ((c >= 0x600 && c <= 0x605) || c == 0x61C || c == 0x6DD ||
      c == 0x70F || c == 0x8E2 || c == 0x1680 || c == 0x180E) {
    return false;
  }
  if ((c >= 0x2000 && c <= 0x200F) || (c >= 0x2028 && c <= 0x202F) ||
      (c >= 0x205F && c <= 0x2064) || (c >= 0x2066 && c <= 0x206F) ||
      c == 0x3000) {
    return false;
  }
  if ((c >= 0xD800 && c <= 0xF8FF) || c == 0xFEFF ||
      (c >= 0xFFF9 && c <= 0xFFFB) || c == 0xFFFE || c == 0xFFFF) {
    return false;
  }
  if (c == 0xE0001 || (c >= 0xE0020 && c <= 0xE007F) || c >= 0xF0000) {
    return false;
  }
  return true;
}

std::string UnicodeEscape(char32_t c) {
  switch (c) {
    case '\\': return "\\\\";
    case '\t': return "\\t";
    case '\n': return "\\n";
    case '\r': return "\\r";
    default: break;
  }
  if (c >= 0x20 && c < 0x7F) return std::string(1, static_cast<char>(c));
  if (c < 0x100) return fmt::format("\\x{:02x}", static_cast<unsigned>(c));
  if (c < 0x10000) return fmt::format("\\u{:04x}", static_cast<unsigned>(c));
  return fmt::format("\\U{:08x}", static_cast<unsigned>(c));
}

std::string StrRepr(std::string_view utf8) {
  std::vector<char32_t> cps = DecodeUtf8(utf8);
  bool has_single = false;
  bool has_double = false;
  for (char32_t c : cps) {
    has_single |= c == '\'';
    has_double |= c == '"';
  }
  char32_t quote = (has_single && !has_double) ? '"' : '\'';
  std::string out;
  out.reserve(utf8.size() + 2);
  AppendUtf8(quote, out);
  for (char32_t c : cps) {
    if (c == quote || c == '\\') {
      out.push_back('\\');
      AppendUtf8(c, out);
    } else if (c == '\t') {
      out += "\\t";
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '\r') {
      out += "\\r";
    } else if (c < 0x20 || c == 0x7F) {
      out += fmt::format("\\x{:02x}", static_cast<unsigned>(c));
    } else if (c < 0x7F || IsPrintable(c)) {
      AppendUtf8(c, out);
    } else {
      out += UnicodeEscape(c);
    }
  }
  AppendUtf8(quote, out);
  return out;
}

std::string BytesRepr(std::string_view bytes) {
  bool has_single = bytes.find('\'') != std::string_view::npos;
  bool has_double = bytes.find('"') != std::string_view::npos;
  char quote = (has_single && !has_double) ? '"' : '\'';
  std::string out = "b";
  out.push_back(quote);
  for (char ch : bytes) {
    auto c = static_cast<unsigned char>(ch);
    if (c == static_cast<unsigned char>(quote) || c == '\\') {
      out.push_back('\\');
      out.push_back(static_cast<char>(c));
    } else if (c == '\t') {
      out += "\\t";
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '\r') {
      out += "\\r";
    } else if (c < 0x20 || c >= 0x7F) {
      out += fmt::format("\\x{:02x}", static_cast<unsigned>(c));
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  out.push_back(quote);
  return out;
}

std::string FloatRepr(double value) { return FormatShortest(value, true); }

std::string ConstantRepr(const Constant& constant) {
  switch (constant.kind) {
    case Constant::Kind::kNone: return "None";
    case Constant::Kind::kTrue: return "True";
    case Constant::Kind::kFalse: return "False";
    case Constant::Kind::kEllipsis: return "...";
    case Constant::Kind::kInt: return constant.text;
    case Constant::Kind::kFloat: return FloatRepr(constant.number);
    case Constant::Kind::kComplex:
      return FormatShortest(constant.number, false) + "j";
    case Constant::Kind::kStr: return StrRepr(constant.text);
    case Constant::Kind::kBytes: return BytesRepr(constant.text);
  }
  return "";
}

std::string ParseIntLiteral(std::string_view token) {
  std::string clean = StripUnderscores(token);
  unsigned base = 10;
  std::size_t start = 0;
  if (clean.size() > 1 && clean[0] == '0') {
    char p = static_cast<char>(clean[1] | 0x20);
    if (p == 'x') base = 16;
    if (p == 'o') base = 8;
    if (p == 'b') base = 2;
    if (base != 10) start = 2;
  }
  cpp_int value = 0;
  for (std::size_t i = start; i < clean.size(); ++i) {
    int digit = HexValue(clean[i]);
    if (digit < 0 || static_cast<unsigned>(digit) >= base) {
      throw LiteralError("invalid digit in integer literal");
    }
    value = value * base + digit;
  }
  return value.str();
}

double ParseFloatLiteral(std::string_view token) {
  std::string clean = StripUnderscores(token);
  if (!clean.empty() && (clean.back() == 'j' || clean.back() == 'J')) {
    clean.pop_back();
  }
  char* end = nullptr;
  double value = std::strtod(clean.c_str(), &end);
  if (end != clean.c_str() + clean.size()) {
    throw LiteralError("invalid float literal");
  }
  return value;
}

std::string DecodeStringBody(std::string_view body, bool raw, bool bytes) {
  std::string out;
  out.reserve(body.size());
  if (bytes) {
    for (char c : body) {
      if (static_cast<unsigned char>(c) >= 0x80) {
        throw LiteralError("bytes can only contain ASCII literal characters");
      }
    }
  }
  if (raw) {
    out.assign(body);
    return out;
  }
  auto put = [&](char32_t cp) {
    if (bytes) {
      out.push_back(static_cast<char>(cp & 0xFF));
    } else {
      AppendUtf8(cp, out);
    }
  };
  std::size_t i = 0;
  while (i < body.size()) {
    char c = body[i];
    if (c != '\\') {
      out.push_back(c);
      ++i;
      continue;
    }
    if (i + 1 >= body.size()) {
      out.push_back('\\');
      break;
    }
    char e = body[i + 1];
    i += 2;
    switch (e) {
      case '\n': break;
      case '\r':
        if (i < body.size() && body[i] == '\n') ++i;
        break;
      case '\\': out.push_back('\\'); break;
      case '\'': out.push_back('\''); break;
      case '"': out.push_back('"'); break;
      case 'a': out.push_back('\a'); break;
      case 'b': out.push_back('\b'); break;
      case 'f': out.push_back('\f'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 't': out.push_back('\t'); break;
      case 'v': out.push_back('\v'); break;
      case '0': case '1': case '2': case '3':
      case '4': case '5': case '6': case '7': {
        char32_t value = static_cast<char32_t>(e - '0');
        for (int k = 0; k < 2 && i < body.size() && body[i] >= '0' &&
                        body[i] <= '7';
             ++k, ++i) {
          value = value * 8 + static_cast<char32_t>(body[i] - '0');
        }
        put(value);
        break;
      }
      case 'x': {
        if (i + 2 > body.size() || HexValue(body[i]) < 0 ||
            HexValue(body[i + 1]) < 0) {
          throw LiteralError(fmt::format(
              "(unicode error) truncated \\xXX escape"));
        }
        put(static_cast<char32_t>(HexValue(body[i]) * 16 +
                                  HexValue(body[i + 1])));
        i += 2;
        break;
      }
      case 'u':
      case 'U': {
        if (bytes) {
          out.push_back('\\');
          out.push_back(e);
          break;
        }
        std::size_t len = e == 'u' ? 4 : 8;
        char32_t value = 0;
        for (std::size_t k = 0; k < len; ++k) {
          if (i + k >= body.size() || HexValue(body[i + k]) < 0) {
            throw LiteralError(fmt::format(
                "(unicode error) truncated \\{}{} escape", e,
                std::string(len, 'X')));
          }
          value = value * 16 + static_cast<char32_t>(HexValue(body[i + k]));
        }
        if (value > 0x10FFFF) {
          throw LiteralError("(unicode error) illegal Unicode character");
        }
        i += len;
        put(value);
        break;
      }
      case 'N':
        if (!bytes) {
          throw LiteralError("\\N{...} escapes are not supported");
        }
        [[fallthrough]];
      default:
        out.push_back('\\');
        out.push_back(e);
        break;
    }
  }
  return out;
}

std::string AddToDecimal(std::string_view digits, long delta) {
  cpp_int value{std::string(digits)};
  value += delta;
  return value.str();
}

}  // namespace mist::py
