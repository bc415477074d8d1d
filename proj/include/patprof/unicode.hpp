#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace patprof {

// Strings are sequences of Unicode scalar values; all lengths and widths in
// the pattern language count scalar values, never bytes.
using Str = std::u32string;
using StrView = std::u32string_view;

// Decode one UTF-8 codepoint. Returns bytes consumed, 0 on malformed input
// (overlong forms, surrogates and values above U+10FFFF are rejected).
inline int decode_utf8(const char* s, std::size_t len, char32_t* cp) {
  if (len == 0) return 0;
  auto c = static_cast<unsigned char>(s[0]);
  if (c < 0x80) {
    *cp = c;
    return 1;
  }
  auto cont = [&](std::size_t i) {
    return (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80;
  };
  if ((c & 0xE0) == 0xC0 && len >= 2 && cont(1)) {
    *cp = (static_cast<char32_t>(c & 0x1F) << 6) | (s[1] & 0x3F);
    return (*cp >= 0x80) ? 2 : 0;
  }
  if ((c & 0xF0) == 0xE0 && len >= 3 && cont(1) && cont(2)) {
    *cp = (static_cast<char32_t>(c & 0x0F) << 12) |
          (static_cast<char32_t>(s[1] & 0x3F) << 6) | (s[2] & 0x3F);
    if (*cp >= 0xD800 && *cp <= 0xDFFF) return 0;
    return (*cp >= 0x800) ? 3 : 0;
  }
  if ((c & 0xF8) == 0xF0 && len >= 4 && cont(1) && cont(2) && cont(3)) {
    *cp = (static_cast<char32_t>(c & 0x07) << 18) |
          (static_cast<char32_t>(s[1] & 0x3F) << 12) |
          (static_cast<char32_t>(s[2] & 0x3F) << 6) | (s[3] & 0x3F);
    return (*cp >= 0x10000 && *cp <= 0x10FFFF) ? 4 : 0;
  }
  return 0;
}

// Encode one scalar value to UTF-8. Returns byte count (1..4).
inline int encode_utf8(char32_t cp, char out[4]) {
  if (cp < 0x80) {
    out[0] = static_cast<char>(cp);
    return 1;
  }
  if (cp < 0x800) {
    out[0] = static_cast<char>(0xC0 | (cp >> 6));
    out[1] = static_cast<char>(0x80 | (cp & 0x3F));
    return 2;
  }
  if (cp < 0x10000) {
    out[0] = static_cast<char>(0xE0 | (cp >> 12));
    out[1] = static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out[2] = static_cast<char>(0x80 | (cp & 0x3F));
    return 3;
  }
  out[0] = static_cast<char>(0xF0 | (cp >> 18));
  out[1] = static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
  out[2] = static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
  out[3] = static_cast<char>(0x80 | (cp & 0x3F));
  return 4;
}

// nullopt on invalid UTF-8.
inline std::optional<Str> utf8_to_u32(std::string_view s) {
  Str out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    char32_t cp = 0;
    int n = decode_utf8(s.data() + i, s.size() - i, &cp);
    if (n == 0) return std::nullopt;
    out.push_back(cp);
    i += static_cast<std::size_t>(n);
  }
  return out;
}

inline std::string u32_to_utf8(StrView s) {
  std::string out;
  out.reserve(s.size());
  char buf[4];
  for (char32_t cp : s) out.append(buf, static_cast<std::size_t>(encode_utf8(cp, buf)));
  return out;
}

inline Str u32_from_ascii(std::string_view s) {
  Str out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<unsigned char>(c));
  return out;
}

}  // namespace patprof
