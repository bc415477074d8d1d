#pragma once

// Shared test helpers: UTF-8 literals, temp dirs, synthetic format
// generators, and the normalized-mutual-information score used to grade
// partitions against generator labels.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <initializer_list>
#include <stdexcept>
#include <fstream>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <unistd.h>

#include "patprof/profiler.hpp"
#include "patprof/rng.hpp"
#include "patprof/unicode.hpp"

namespace testutil {

using patprof::Rng;
using patprof::Str;

inline Str u(const char* s) { return *patprof::utf8_to_u32(s); }

inline std::vector<Str> us(std::initializer_list<const char*> items) {
  std::vector<Str> out;
  for (const char* s : items) out.push_back(u(s));
  return out;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("patprof_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::filesystem::path file(const std::string& name, const std::string& body) const {
    auto p = path / name;
    std::ofstream out(p, std::ios::binary);
    out << body;
    return p;
  }
};

// ── synthetic formats ──────────────────────────────────────────────────

// A format is a small template program; render() draws one string.
struct Format {
  struct Seg {
    enum Kind { Literal, Digits, Lowers, Uppers, Choice } kind = Literal;
    std::string text;            // Literal
    int len = 1;                 // Digits/Lowers/Uppers
    std::vector<std::string> options;  // Choice
  };
  std::vector<Seg> segs;

  static Format parse(const std::string& spec) {
    // spec tokens: 'lit, d3, l4, u2, (a|bb)
    Format f;
    std::size_t i = 0;
    while (i < spec.size()) {
      char c = spec[i];
      Seg s;
      if (c == '\'') {
        std::size_t end = spec.find('\'', i + 1);
        s.kind = Seg::Literal;
        s.text = spec.substr(i + 1, end - i - 1);
        i = end + 1;
      } else if (c == '(') {
        std::size_t end = spec.find(')', i);
        s.kind = Seg::Choice;
        std::string body = spec.substr(i + 1, end - i - 1);
        std::size_t p = 0;
        while (true) {
          std::size_t bar = body.find('|', p);
          s.options.push_back(body.substr(p, bar - p));
          if (bar == std::string::npos) break;
          p = bar + 1;
        }
        i = end + 1;
      } else {
        s.kind = c == 'd' ? Seg::Digits : (c == 'l' ? Seg::Lowers : Seg::Uppers);
        std::size_t j = i + 1;
        while (j < spec.size() && std::isdigit(static_cast<unsigned char>(spec[j]))) ++j;
        s.len = std::stoi(spec.substr(i + 1, j - i - 1));
        i = j;
      }
      f.segs.push_back(std::move(s));
    }
    return f;
  }

  std::string render(Rng& rng) const {
    std::string out;
    for (const auto& s : segs) {
      switch (s.kind) {
        case Seg::Literal: out += s.text; break;
        case Seg::Choice: out += s.options[rng.below(s.options.size())]; break;
        case Seg::Digits:
          for (int i = 0; i < s.len; ++i) out.push_back(static_cast<char>('0' + rng.below(10)));
          break;
        case Seg::Lowers:
          for (int i = 0; i < s.len; ++i) out.push_back(static_cast<char>('a' + rng.below(26)));
          break;
        case Seg::Uppers:
          for (int i = 0; i < s.len; ++i) out.push_back(static_cast<char>('A' + rng.below(26)));
          break;
      }
    }
    return out;
  }
};

struct LabeledData {
  std::vector<Str> strings;
  std::vector<std::size_t> labels;  // generator format index, aligned
};

// Renders `count` strings per format and shuffles them deterministically.
// Cross-format duplicates are rejected so labels stay well defined.
inline LabeledData make_labeled(const std::vector<std::string>& format_specs,
                                const std::vector<std::size_t>& counts, Rng& rng) {
  LabeledData data;
  std::unordered_map<Str, std::size_t> label_of;
  for (std::size_t f = 0; f < format_specs.size(); ++f) {
    Format fmt = Format::parse(format_specs[f]);
    for (std::size_t i = 0; i < counts[f]; ++i) {
      Str s = u(fmt.render(rng).c_str());
      auto it = label_of.find(s);
      if (it != label_of.end() && it->second != f) {
        --i;  // cross-format collision: draw again
        continue;
      }
      label_of.emplace(s, f);
      data.strings.push_back(std::move(s));
      data.labels.push_back(f);
    }
  }
  for (std::size_t i = data.strings.size(); i > 1; --i) {
    std::size_t j = rng.below(i);
    std::swap(data.strings[i - 1], data.strings[j]);
    std::swap(data.labels[i - 1], data.labels[j]);
  }
  return data;
}

// The six-format references corpus: missing entries, two DOI shapes, two
// ISBN-10 shapes and PMC ids. ISBN check digits split the leading digit
// ranges so the two ISBN shapes never share a long prefix by accident.
inline std::vector<std::string> references_specs() {
  return {
      "'not_available'",
      "'doi:'( |  )'10.1016/'u1d4'-'d4'('d2')'d5'-'d1",
      "'ISBN: '(0|1|2|3|4)'-'d3'-'d5'-X'",
      "'doi:'( |  )'10.13039/'d9",
      "'ISBN: '(5|6|7|8|9)'-'d3'-'d5'-'d1",
      "'PMC'd7",
  };
}

inline LabeledData make_references(Rng& rng,
                                   std::vector<std::size_t> counts = {5, 11, 34, 110, 267,
                                                                      1024}) {
  return make_labeled(references_specs(), counts, rng);
}

// Partition labels induced by a profile: index of the entry owning each
// string (partition membership, not pattern matching).
inline std::vector<std::size_t> profile_labels(const patprof::Profile& p,
                                               const std::vector<Str>& strings) {
  std::unordered_map<Str, std::size_t> owner;
  for (std::size_t e = 0; e < p.entries.size(); ++e)
    for (const Str& s : p.entries[e].data) owner[s] = e;
  std::vector<std::size_t> labels;
  labels.reserve(strings.size());
  for (const Str& s : strings) {
    auto it = owner.find(s);
    if (it == owner.end())
      throw std::runtime_error("profile does not cover: " + patprof::u32_to_utf8(s));
    labels.push_back(it->second);
  }
  return labels;
}

// Normalized mutual information (symmetric uncertainty) in [0, 1].
inline double nmi(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) throw std::runtime_error("nmi: label size mismatch");
  const double n = static_cast<double>(a.size());
  std::map<std::size_t, double> pa, pb;
  std::map<std::pair<std::size_t, std::size_t>, double> pab;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pa[a[i]] += 1.0;
    pb[b[i]] += 1.0;
    pab[{a[i], b[i]}] += 1.0;
  }
  double ha = 0.0, hb = 0.0, mi = 0.0;
  for (auto& [k, c] : pa) ha -= (c / n) * std::log2(c / n);
  for (auto& [k, c] : pb) hb -= (c / n) * std::log2(c / n);
  for (auto& [kv, c] : pab) {
    double pxy = c / n;
    double px = pa[kv.first] / n;
    double py = pb[kv.second] / n;
    mi += pxy * std::log2(pxy / (px * py));
  }
  if (ha + hb == 0.0) return 1.0;  // both partitions trivial
  return 2.0 * mi / (ha + hb);
}

}  // namespace testutil
