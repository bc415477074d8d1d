#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "patprof/atom.hpp"
#include "patprof/unicode.hpp"

namespace patprof {

// A pattern is a sequence of atoms; it describes a string iff the atoms
// consume it exactly. The empty sequence is the Empty pattern, which
// describes only ε.
class Pattern {
 public:
  Pattern() = default;
  explicit Pattern(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}

  bool is_empty_pattern() const { return atoms_.empty(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  bool describes(StrView s) const {
    for (const Atom& a : atoms_) {
      std::size_t n = a.match(s);
      if (n == 0) return false;
      s.remove_prefix(n);
    }
    return s.empty();
  }

  std::string human() const {
    if (atoms_.empty()) return "ε";  // ε
    std::string out;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (i) out += "·";  // ·
      out += atoms_[i].human();
    }
    return out;
  }

  std::string regex() const {
    std::string out = "^";
    for (const Atom& a : atoms_) out += a.regex_form();
    out += "$";
    return out;
  }

  // Canonical identity for set comparisons and caches.
  std::string key() const {
    if (atoms_.empty()) return "ε";
    std::string out;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (i) out += "|";
      out += atoms_[i].key();
    }
    return out;
  }

  bool operator==(const Pattern& other) const { return key() == other.key(); }

 private:
  std::vector<Atom> atoms_;
};

constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

// Result of best-pattern learning. An absent pattern is the bottom pattern ⊥,
// which describes nothing; its cost is always ∞.
struct BestPattern {
  std::optional<Pattern> pattern;
  double cost = kInfiniteCost;

  bool is_bottom() const { return !pattern.has_value(); }

  std::string human() const { return pattern ? pattern->human() : "⊥"; }  // ⊥

  static BestPattern bottom() { return {}; }
};

}  // namespace patprof
