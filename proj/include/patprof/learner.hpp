#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "patprof/cost.hpp"
#include "patprof/errors.hpp"
#include "patprof/pattern.hpp"
#include "patprof/universe.hpp"

namespace patprof {

inline constexpr std::size_t kDefaultStateBudget = 200000;

struct LearnOptions {
  std::size_t state_budget = kDefaultStateBudget;
};

struct CompatibleAtom {
  Atom atom;
  std::vector<std::uint32_t> advance;  // matched prefix length per string
};

// Maximal set of atoms compatible with all suffixes: every universe atom that
// matches each one, fixed-width variants of width-0 Class atoms whose match
// length is uniform, and a Const atom for every nonempty prefix of the common
// prefix. Result order is deterministic: universe order, width variants in
// universe order, then constants from shortest to longest.
inline std::vector<CompatibleAtom> compatible_atoms_full(std::span<const StrView> suffixes,
                                                         const AtomUniverse& u,
                                                         bool with_consts = true) {
  std::vector<CompatibleAtom> out;
  if (suffixes.empty()) return out;
  for (StrView s : suffixes)
    if (s.empty()) return out;  // atoms never match empty prefixes

  std::vector<CompatibleAtom> widths;
  for (const Atom& a : u.atoms()) {
    CompatibleAtom ca;
    ca.atom = a;
    ca.advance.reserve(suffixes.size());
    bool ok = true;
    bool uniform = a.kind() == AtomKind::Class && a.width() == 0;
    std::uint32_t w0 = 0;
    for (std::size_t i = 0; i < suffixes.size(); ++i) {
      std::size_t n = a.match(suffixes[i]);
      if (n == 0) {
        ok = false;
        break;
      }
      ca.advance.push_back(static_cast<std::uint32_t>(n));
      if (i == 0)
        w0 = static_cast<std::uint32_t>(n);
      else if (ca.advance.back() != w0)
        uniform = false;
    }
    if (!ok) continue;
    if (uniform) {
      CompatibleAtom fixed;
      fixed.atom = a.with_width(w0);
      fixed.advance = ca.advance;
      widths.push_back(std::move(fixed));
    }
    out.push_back(std::move(ca));
  }
  for (auto& w : widths) out.push_back(std::move(w));

  if (with_consts) {
    StrView lcp = suffixes[0];
    for (StrView s : suffixes) {
      std::size_t n = 0;
      std::size_t cap = std::min(lcp.size(), s.size());
      while (n < cap && lcp[n] == s[n]) ++n;
      lcp = lcp.substr(0, n);
      if (lcp.empty()) break;
    }
    for (std::size_t len = 1; len <= lcp.size(); ++len) {
      CompatibleAtom ca;
      ca.atom = u.constant(lcp.substr(0, len));
      ca.advance.assign(suffixes.size(), static_cast<std::uint32_t>(len));
      out.push_back(std::move(ca));
    }
  }

  // Dedup by atom identity (a config Const can coincide with an enriched one).
  std::unordered_set<std::string> seen;
  std::vector<CompatibleAtom> unique;
  unique.reserve(out.size());
  for (auto& ca : out)
    if (seen.insert(ca.atom.key()).second) unique.push_back(std::move(ca));
  return unique;
}

inline std::vector<Atom> compatible_atoms(std::span<const StrView> suffixes,
                                          const AtomUniverse& u) {
  std::vector<Atom> out;
  for (auto& ca : compatible_atoms_full(suffixes, u)) out.push_back(std::move(ca.atom));
  return out;
}

// Memoized DAG of every pattern over the enriched universe that describes the
// dataset. Nodes are per-string cursor vectors; every edge advances every
// cursor, so the graph is acyclic and paths from the start to the terminal
// node spell exactly the describing patterns.
class PatternGraph {
 public:
  struct Edge {
    Atom atom;
    std::size_t to = 0;
    double weight = 0.0;  // Q(atom) * W contribution of this step
  };

  bool has_accept() const { return accept_ != kNone; }
  std::size_t state_count() const { return offsets_.size(); }
  std::size_t start() const { return start_; }
  std::size_t accept() const { return accept_; }
  const std::vector<Edge>& edges_from(std::size_t node) const { return edges_[node]; }
  const std::vector<std::uint32_t>& offsets(std::size_t node) const { return offsets_[node]; }
  const std::vector<Str>& data() const { return distinct_; }
  bool const_enrichment_dropped() const { return consts_dropped_; }

  // All start->accept paths with at most max_len atoms. Enumeration raises
  // CapacityError once `cap` patterns have been produced; callers size their
  // instances so the cap is unreachable.
  std::vector<Pattern> patterns(std::size_t max_len, std::size_t cap = 1000000) const {
    std::vector<Pattern> out;
    if (!has_accept()) return out;
    if (start_ == accept_) {
      out.emplace_back();  // Empty
      return out;
    }
    std::vector<Atom> stack;
    enumerate(start_, max_len, stack, out, cap);
    return out;
  }

  // Least-cost path under the edge weights; ties broken by the smaller
  // accumulated human rendering so results are reproducible.
  BestPattern best() const {
    if (!has_accept()) return BestPattern::bottom();
    if (start_ == accept_) return {Pattern(), 0.0};

    const std::size_t n = offsets_.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::vector<std::uint64_t> sums(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::uint32_t off : offsets_[i]) sums[i] += off;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return sums[a] != sums[b] ? sums[a] < sums[b] : a < b;
    });

    std::vector<double> dist(n, kInfiniteCost);
    std::vector<std::string> render(n);
    std::vector<std::pair<std::size_t, std::size_t>> pred(n, {kNone, 0});
    dist[start_] = 0.0;
    std::vector<bool> reached(n, false);
    reached[start_] = true;

    for (std::size_t node : order) {
      if (!reached[node] || dist[node] == kInfiniteCost) continue;
      const auto& out_edges = edges_[node];
      for (std::size_t ei = 0; ei < out_edges.size(); ++ei) {
        const Edge& e = out_edges[ei];
        double cand = dist[node] + e.weight;
        if (cand > dist[e.to]) continue;
        std::string cand_render = render[node];
        if (!cand_render.empty()) cand_render += "·";
        cand_render += e.atom.human();
        if (cand < dist[e.to] || !reached[e.to] || cand_render < render[e.to]) {
          dist[e.to] = cand;
          render[e.to] = std::move(cand_render);
          pred[e.to] = {node, ei};
          reached[e.to] = true;
        }
      }
    }
    if (!reached[accept_] || dist[accept_] == kInfiniteCost) return BestPattern::bottom();

    std::vector<Atom> atoms;
    for (std::size_t at = accept_; at != start_;) {
      auto [from, ei] = pred[at];
      atoms.push_back(edges_[from][ei].atom);
      at = from;
    }
    std::reverse(atoms.begin(), atoms.end());
    return {Pattern(std::move(atoms)), dist[accept_]};
  }

 private:
  friend PatternGraph learn_patterns(std::span<const Str>, const AtomUniverse&,
                                     const LearnOptions&);

  struct OffsetsHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const {
      std::uint64_t h = 0xCBF29CE484222325ULL;
      for (std::uint32_t x : v) {
        h ^= x;
        h *= 0x100000001B3ULL;
      }
      return static_cast<std::size_t>(h);
    }
  };

  // Breadth-first expansion with hash-consed cursor vectors. Returns false
  // when the state budget is exceeded.
  bool build(const AtomUniverse& u, std::size_t budget, bool with_consts) {
    const std::size_t n = distinct_.size();
    offsets_.clear();
    edges_.clear();
    consts_dropped_ = !with_consts;

    std::unordered_map<std::vector<std::uint32_t>, std::size_t, OffsetsHash> ids;
    std::deque<std::size_t> queue;
    std::vector<std::uint32_t> terminal(n);
    for (std::size_t i = 0; i < n; ++i)
      terminal[i] = static_cast<std::uint32_t>(distinct_[i].size());

    auto intern = [&](std::vector<std::uint32_t> offs) -> std::size_t {
      auto it = ids.find(offs);
      if (it != ids.end()) return it->second;
      std::size_t id = offsets_.size();
      ids.emplace(offs, id);
      offsets_.push_back(std::move(offs));
      edges_.emplace_back();
      queue.push_back(id);
      return id;
    };

    start_ = intern(std::vector<std::uint32_t>(n, 0));
    accept_ = kNone;

    std::vector<StrView> suffixes(n);
    while (!queue.empty()) {
      std::size_t node = queue.front();
      queue.pop_front();
      if (offsets_[node] == terminal) {
        accept_ = node;
        continue;
      }
      bool any_exhausted = false;
      for (std::size_t i = 0; i < n; ++i) {
        suffixes[i] = StrView(distinct_[i]).substr(offsets_[node][i]);
        if (suffixes[i].empty()) any_exhausted = true;
      }
      if (any_exhausted) continue;  // dead end: atoms cannot match ε

      auto atoms = compatible_atoms_full(suffixes, u, with_consts);
      edges_[node].reserve(atoms.size());
      for (auto& ca : atoms) {
        std::vector<std::uint32_t> next(n);
        double weight_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          next[i] = offsets_[node][i] + ca.advance[i];
          weight_sum += static_cast<double>(ca.advance[i]) /
                        static_cast<double>(distinct_[i].size());
        }
        double weight = ca.atom.cost() * weight_sum / static_cast<double>(n);
        std::size_t to = intern(std::move(next));
        if (offsets_.size() > budget) return false;
        edges_[node].push_back({std::move(ca.atom), to, weight});
      }
    }
    return true;
  }

  void enumerate(std::size_t node, std::size_t depth_left, std::vector<Atom>& stack,
                 std::vector<Pattern>& out, std::size_t cap) const {
    if (node == accept_) {
      if (out.size() >= cap) throw CapacityError("pattern enumeration cap exceeded");
      out.emplace_back(stack);
      return;
    }
    if (depth_left == 0) return;
    for (const Edge& e : edges_[node]) {
      stack.push_back(e.atom);
      enumerate(e.to, depth_left - 1, stack, out, cap);
      stack.pop_back();
    }
  }

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::uint32_t>> offsets_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<Str> distinct_;
  std::size_t start_ = kNone;
  std::size_t accept_ = kNone;
  bool consts_dropped_ = false;
};

// Learns the graph of all patterns over the enriched universe that describe
// every string in S. On state-budget overflow the constant enrichment is
// dropped and learning retried; a second overflow raises CapacityError.
inline PatternGraph learn_patterns(std::span<const Str> data, const AtomUniverse& u,
                                   const LearnOptions& opts = {}) {
  PatternGraph g;
  g.distinct_ = dedupe(data);
  if (g.distinct_.empty()) throw UsageError("learn_patterns requires a nonempty dataset");
  if (!g.build(u, opts.state_budget, true)) {
    if (!g.build(u, opts.state_budget, false))
      throw CapacityError("learner exceeded the state budget (" +
                          std::to_string(opts.state_budget) + " states)");
  }
  return g;
}

inline BestPattern learn_best_pattern(std::span<const Str> data, const AtomUniverse& u,
                                      const LearnOptions& opts = {}) {
  return learn_patterns(data, u, opts).best();
}

}  // namespace patprof
