#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "patprof/errors.hpp"
#include "patprof/unicode.hpp"

namespace patprof {

constexpr char32_t kMaxScalar = 0x10FFFF;

// Set of Unicode scalar values, stored as sorted disjoint inclusive ranges.
class CharSet {
 public:
  CharSet() = default;

  static CharSet all() {
    CharSet cs;
    cs.ranges_.emplace_back(0, kMaxScalar);
    return cs;
  }

  static CharSet of(std::string_view ascii_chars) {
    CharSet cs;
    for (char c : ascii_chars) cs.add(static_cast<unsigned char>(c));
    cs.normalize();
    return cs;
  }

  void add(char32_t ch) { add(ch, ch); }

  void add(char32_t lo, char32_t hi) {
    if (lo > hi) std::swap(lo, hi);
    ranges_.emplace_back(lo, hi);
    normalized_ = false;
  }

  void add_set(const CharSet& other) {
    for (auto& r : other.ranges_) add(r.first, r.second);
  }

  void normalize() {
    if (normalized_) return;
    std::sort(ranges_.begin(), ranges_.end());
    std::vector<std::pair<char32_t, char32_t>> merged;
    for (auto& r : ranges_) {
      if (!merged.empty() && r.first <= merged.back().second + 1 &&
          merged.back().second != kMaxScalar) {
        merged.back().second = std::max(merged.back().second, r.second);
      } else if (!merged.empty() && r.first <= merged.back().second) {
        merged.back().second = std::max(merged.back().second, r.second);
      } else {
        merged.push_back(r);
      }
    }
    ranges_ = std::move(merged);
    normalized_ = true;
  }

  CharSet negated() const {
    CharSet out;
    char32_t next = 0;
    bool open = true;
    for (auto& r : ranges_) {
      if (r.first > next) out.add(next, r.first - 1);
      if (r.second == kMaxScalar) {
        open = false;
        break;
      }
      next = r.second + 1;
    }
    if (open) out.add(next, kMaxScalar);
    out.normalize();
    return out;
  }

  bool contains(char32_t ch) const {
    auto it = std::upper_bound(
        ranges_.begin(), ranges_.end(), ch,
        [](char32_t v, const std::pair<char32_t, char32_t>& r) { return v < r.first; });
    if (it == ranges_.begin()) return false;
    --it;
    return ch >= it->first && ch <= it->second;
  }

  bool empty() const { return ranges_.empty(); }

  bool is_all() const {
    return ranges_.size() == 1 && ranges_[0].first == 0 && ranges_[0].second == kMaxScalar;
  }

  const std::vector<std::pair<char32_t, char32_t>>& ranges() const { return ranges_; }

  // Length of the maximal prefix of s whose characters are all in the set.
  std::size_t prefix_run(StrView s) const {
    std::size_t n = 0;
    while (n < s.size() && contains(s[n])) ++n;
    return n;
  }

  // Regex-class body, e.g. "a-zA-Z0-9" (no enclosing brackets).
  std::string regex_body() const {
    std::string out;
    auto emit = [&](char32_t cp) {
      static const std::string special = "\\^]-[";
      if (cp < 0x80 && special.find(static_cast<char>(cp)) != std::string::npos) {
        out.push_back('\\');
        out.push_back(static_cast<char>(cp));
      } else {
        char buf[4];
        out.append(buf, static_cast<std::size_t>(encode_utf8(cp, buf)));
      }
    };
    for (auto& r : ranges_) {
      emit(r.first);
      if (r.second > r.first) {
        if (r.second > r.first + 1) out.push_back('-');
        emit(r.second);
      }
    }
    return out;
  }

  bool operator==(const CharSet& other) const { return ranges_ == other.ranges_; }

 private:
  std::vector<std::pair<char32_t, char32_t>> ranges_;
  bool normalized_ = true;
};

// Parses a bare range spec such as "a-z0-9_" or "\\d\\s" into a set.
// Used by atom-config "class" definitions and by the regex engine.
inline CharSet parse_charset_spec(StrView spec, bool* saw_error = nullptr) {
  CharSet cs;
  auto fail = [&]() {
    if (saw_error) *saw_error = true;
    return cs;
  };
  std::size_t i = 0;
  auto decode_escape = [&](std::size_t& pos, char32_t* out, bool* is_class) -> bool {
    // pos points at the char after the backslash
    if (pos >= spec.size()) return false;
    char32_t e = spec[pos++];
    *is_class = false;
    switch (e) {
      case U'd': cs.add(U'0', U'9'); *is_class = true; return true;
      case U'w':
        cs.add(U'a', U'z');
        cs.add(U'A', U'Z');
        cs.add(U'0', U'9');
        cs.add(U'_');
        *is_class = true;
        return true;
      case U's':
        cs.add(U' ');
        cs.add(U'\t', U'\r');  // \t \n \v \f \r
        *is_class = true;
        return true;
      case U't': *out = U'\t'; return true;
      case U'n': *out = U'\n'; return true;
      case U'r': *out = U'\r'; return true;
      default: *out = e; return true;  // escaped literal
    }
  };
  while (i < spec.size()) {
    char32_t lo;
    if (spec[i] == U'\\') {
      ++i;
      bool is_class = false;
      if (!decode_escape(i, &lo, &is_class)) return fail();
      if (is_class) continue;
    } else {
      lo = spec[i++];
    }
    if (i + 1 < spec.size() && spec[i] == U'-' && spec[i + 1] != U'\0') {
      // range lo-hi (a trailing '-' is a literal)
      ++i;
      char32_t hi;
      if (spec[i] == U'\\') {
        ++i;
        bool is_class = false;
        if (!decode_escape(i, &hi, &is_class) || is_class) return fail();
      } else {
        hi = spec[i++];
      }
      if (hi < lo) return fail();
      cs.add(lo, hi);
    } else if (i < spec.size() && spec[i] == U'-' && i + 1 == spec.size()) {
      cs.add(lo);
      cs.add(U'-');
      ++i;
    } else {
      cs.add(lo);
    }
  }
  cs.normalize();
  return cs;
}

}  // namespace patprof
