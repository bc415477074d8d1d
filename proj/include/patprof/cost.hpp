#pragma once

#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "patprof/errors.hpp"
#include "patprof/pattern.hpp"

namespace patprof {

// Stable dedup preserving first occurrence. Describing a dataset is a set
// property, so all learning and scoring happens over distinct strings.
inline std::vector<Str> dedupe(std::span<const Str> strings) {
  std::vector<Str> out;
  std::unordered_set<std::u32string> seen;
  out.reserve(strings.size());
  for (const Str& s : strings) {
    if (seen.insert(s).second) out.push_back(s);
  }
  return out;
}

struct CostTerm {
  Atom atom;
  double static_cost = 0.0;
  double weight = 0.0;  // W(i, S | P), in (0, 1]
};

struct CostBreakdown {
  std::vector<CostTerm> terms;
  double total = 0.0;
};

// Cost of describing a dataset with a pattern: the sum over atoms of the
// static cost weighted by the average fraction of each string the atom
// consumes. Empty costs 0. Throws DescribesViolation if the pattern fails
// on any string.
inline CostBreakdown pattern_cost(const Pattern& p, std::span<const Str> data) {
  std::vector<Str> distinct = dedupe(data);
  CostBreakdown out;
  if (p.is_empty_pattern()) {
    for (const Str& s : distinct)
      if (!s.empty())
        throw DescribesViolation("Empty does not describe a nonempty string");
    return out;
  }
  const std::size_t k = p.atoms().size();
  const double n = static_cast<double>(distinct.size());
  std::vector<double> fraction_sums(k, 0.0);
  for (const Str& s : distinct) {
    if (s.empty())
      throw DescribesViolation("a nonempty pattern does not describe ε");
    StrView rest = s;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t len = p.atoms()[i].match(rest);
      if (len == 0)
        throw DescribesViolation("pattern " + p.human() + " does not describe input");
      fraction_sums[i] += static_cast<double>(len) / static_cast<double>(s.size());
      rest.remove_prefix(len);
    }
    if (!rest.empty())
      throw DescribesViolation("pattern " + p.human() + " leaves a suffix unmatched");
  }
  out.terms.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    CostTerm term;
    term.atom = p.atoms()[i];
    term.static_cost = term.atom.cost();
    term.weight = fraction_sums[i] / n;
    out.total += term.static_cost * term.weight;
    out.terms.push_back(std::move(term));
  }
  return out;
}

inline double pattern_cost_total(const Pattern& p, std::span<const Str> data) {
  return pattern_cost(p, data).total;
}

}  // namespace patprof
