#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "patprof/cost.hpp"
#include "patprof/learner.hpp"
#include "patprof/rng.hpp"

namespace patprof {

// Knobs for the sampling-based approximations.
struct ApproxParams {
  double theta = 1.25;    // pattern-sampling factor, >= 1.0
  double mu = 4.0;        // string-sampling factor, >= 1.0
  int min_patterns = 1;   // m
  int max_patterns = 10;  // M
  std::uint64_t seed = 0;

  void validate() const {
    if (min_patterns < 1 || max_patterns < min_patterns)
      throw UsageError("need 1 <= min-patterns <= max-patterns");
    if (theta < 1.0) throw UsageError("theta must be at least 1.0");
    if (mu < 1.0) throw UsageError("mu must be at least 1.0");
  }
};

// Syntactic dissimilarity: the cost of the best pattern describing the pair
// together; 0 for identical strings, infinity when no pattern exists.
inline BestPattern dissimilarity(const Str& x, const Str& y, const AtomUniverse& u,
                                 const LearnOptions& opts = {}) {
  if (x == y) {
    if (x.empty()) return {Pattern(), 0.0};
    return {Pattern({u.constant(x)}), 0.0};
  }
  Str pair[2] = {x, y};
  try {
    return learn_best_pattern(pair, u, opts);
  } catch (const CapacityError&) {
    return BestPattern::bottom();
  }
}

// Cache of pairwise best patterns keyed by unordered string pairs, plus a
// deduplicated list of every cached pattern in insertion order (the list is
// what the matrix approximation scans, so its order must be reproducible).
class PairCache {
 public:
  const BestPattern* find(const Str& a, const Str& b) const {
    auto it = map_.find(make_key(a, b));
    return it == map_.end() ? nullptr : &it->second;
  }

  void insert(const Str& a, const Str& b, BestPattern bp) {
    if (bp.pattern && a != b) {
      const std::string k = bp.pattern->key();
      if (pattern_keys_.insert(k).second) patterns_.push_back(*bp.pattern);
    }
    map_.emplace(make_key(a, b), std::move(bp));
  }

  std::span<const Pattern> patterns() const { return patterns_; }
  std::size_t size() const { return map_.size(); }

 private:
  static std::string make_key(const Str& a, const Str& b) {
    const Str& lo = a <= b ? a : b;
    const Str& hi = a <= b ? b : a;
    std::string k = u32_to_utf8(lo);
    k.push_back('\0');
    k += u32_to_utf8(hi);
    return k;
  }

  std::unordered_map<std::string, BestPattern> map_;
  std::vector<Pattern> patterns_;
  std::unordered_set<std::string> pattern_keys_;
};

// Farthest-first pattern sampling: pick up to m_hat seed strings, each as
// dissimilar as possible from those already picked, and learn best patterns
// for every (seed, string) pair. The start seed is drawn from rng; ties in
// the argmax break by input order.
inline PairCache sample_dissimilarities(std::span<const Str> strings, std::size_t m_hat,
                                        const AtomUniverse& u, Rng& rng,
                                        const LearnOptions& opts = {},
                                        std::optional<std::size_t> start_index = {}) {
  PairCache cache;
  std::vector<Str> distinct = dedupe(strings);
  if (distinct.empty() || m_hat == 0) return cache;
  const std::size_t n = distinct.size();
  const std::size_t seeds = std::min(m_hat, n);

  std::size_t current = start_index.value_or(rng.below(n));
  std::vector<bool> in_rho(n, false);
  // min over seeds of the cached cost, per string
  std::vector<double> min_cost(n, kInfiniteCost);

  for (std::size_t round = 0; round < seeds; ++round) {
    in_rho[current] = true;
    for (std::size_t i = 0; i < n; ++i) {
      const Str& a = distinct[current];
      const Str& b = distinct[i];
      const BestPattern* cached = cache.find(a, b);
      if (!cached) {
        cache.insert(a, b, dissimilarity(a, b, u, opts));
        cached = cache.find(a, b);
      }
      min_cost[i] = std::min(min_cost[i], cached->cost);
    }
    if (round + 1 == seeds) break;
    // most dissimilar string w.r.t. its closest seed
    std::size_t best = n;
    double best_cost = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (in_rho[i]) continue;
      if (min_cost[i] > best_cost) {
        best_cost = min_cost[i];
        best = i;
      }
    }
    if (best == n) break;
    current = best;
  }
  return cache;
}

// Dense symmetric matrix with a zero diagonal; infinity marks pairs that no
// pattern describes.
class DissimilarityMatrix {
 public:
  DissimilarityMatrix() = default;
  explicit DissimilarityMatrix(std::size_t n) : n_(n), cells_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    cells_[i * n_ + j] = v;
    cells_[j * n_ + i] = v;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> cells_;
};

// Completes the pairwise matrix from the sampled cache. Uncached pairs are
// approximated by the cheapest cached pattern that describes both strings;
// when none does, the pair is learned exactly and added to the cache so later
// pairs can reuse it. Pairs are processed in fixed index order.
inline DissimilarityMatrix approx_dmatrix(std::span<const Str> strings, PairCache& cache,
                                          const AtomUniverse& u,
                                          const LearnOptions& opts = {}) {
  std::vector<Str> distinct = dedupe(strings);
  const std::size_t n = distinct.size();
  DissimilarityMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Str& x = distinct[i];
      const Str& y = distinct[j];
      if (const BestPattern* cached = cache.find(x, y)) {
        m.set(i, j, cached->cost);
        continue;
      }
      double best = kInfiniteCost;
      bool found = false;
      const Str pair[2] = {x, y};
      for (const Pattern& p : cache.patterns()) {
        if (!p.describes(x) || !p.describes(y)) continue;
        best = std::min(best, pattern_cost_total(p, pair));
        found = true;
      }
      if (!found) {
        BestPattern bp = dissimilarity(x, y, u, opts);
        best = bp.cost;
        cache.insert(x, y, std::move(bp));
      }
      m.set(i, j, best);
    }
  }
  return m;
}

// Binary dendrogram. Leaves are input indices 0..leaves-1; merge i creates
// node id leaves+i. Merge heights are non-decreasing under complete linkage.
struct Hierarchy {
  struct Merge {
    std::size_t left = 0, right = 0;  // node ids
    double height = 0.0;
  };

  std::size_t leaves = 0;
  std::vector<Merge> merges;

  // Clusters of leaf indices after splitting the top k nodes. Undoing the
  // merges in reverse creation order guarantees that the (k+1)-cut refines
  // the k-cut by splitting exactly one cluster. Clusters are ordered by
  // their smallest leaf index.
  std::vector<std::vector<std::size_t>> cut(std::size_t k) const {
    k = std::max<std::size_t>(1, std::min(k, leaves));
    std::vector<std::size_t> roots;
    if (merges.empty()) {
      for (std::size_t i = 0; i < leaves; ++i) roots.push_back(i);
    } else {
      roots.push_back(leaves + merges.size() - 1);  // overall root
      while (roots.size() < k) {
        // split the most recently created node among current roots
        std::size_t pick = 0;
        for (std::size_t i = 1; i < roots.size(); ++i)
          if (roots[i] > roots[pick]) pick = i;
        std::size_t node = roots[pick];
        const Merge& mg = merges[node - leaves];
        roots.erase(roots.begin() + static_cast<std::ptrdiff_t>(pick));
        roots.push_back(mg.left);
        roots.push_back(mg.right);
      }
    }
    std::vector<std::vector<std::size_t>> clusters;
    clusters.reserve(roots.size());
    for (std::size_t r : roots) {
      std::vector<std::size_t> members;
      collect_leaves(r, members);
      std::sort(members.begin(), members.end());
      clusters.push_back(std::move(members));
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return clusters;
  }

  void collect_leaves(std::size_t node, std::vector<std::size_t>& out) const {
    if (node < leaves) {
      out.push_back(node);
      return;
    }
    const Merge& mg = merges[node - leaves];
    collect_leaves(mg.left, out);
    collect_leaves(mg.right, out);
  }
};

// Agglomerative hierarchical clustering with complete linkage: repeatedly
// merge the pair of clusters whose farthest members are closest. Ties break
// on the smallest (creation id, creation id) pair. Infinite entries only
// merge once no finite-linkage pair remains.
inline Hierarchy ahc(const DissimilarityMatrix& a) {
  const std::size_t n = a.size();
  Hierarchy h;
  h.leaves = n;
  if (n <= 1) return h;

  // linkage matrix indexed by creation id; grows by one row per merge
  const std::size_t total = 2 * n - 1;
  std::vector<double> link(total * total, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return link[i * total + j]; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) at(i, j) = a.at(i, j);

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) active.push_back(i);

  while (active.size() > 1) {
    std::size_t bi = 0, bj = 0;
    double best = kInfiniteCost;
    bool found = false;
    for (std::size_t p = 0; p < active.size(); ++p) {
      for (std::size_t q = p + 1; q < active.size(); ++q) {
        double d = at(active[p], active[q]);
        if (!found || d < best) {
          best = d;
          bi = active[p];
          bj = active[q];
          found = true;
        }
      }
    }
    std::size_t id = n + h.merges.size();
    h.merges.push_back({bi, bj, best});
    for (std::size_t k : active) {
      if (k == bi || k == bj) continue;
      double d = std::max(at(bi, k), at(bj, k));
      at(id, k) = d;
      at(k, id) = d;
    }
    active.erase(std::remove_if(active.begin(), active.end(),
                                [&](std::size_t k) { return k == bi || k == bj; }),
                 active.end());
    active.push_back(id);
  }
  return h;
}

// Mean dissimilarity over all intra-cluster pairs of the cut. Weighting by
// pairs keeps the measure steady when a singleton splits off a large cluster,
// so the knee scan stops where splits stop explaining anything. No pairs at
// all (every cluster a singleton) gives 0.
inline double mean_intra_dissimilarity(const std::vector<std::vector<std::size_t>>& clusters,
                                       const DissimilarityMatrix& a) {
  double sum = 0.0;
  std::size_t pairs = 0;
  for (const auto& c : clusters) {
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = i + 1; j < c.size(); ++j) {
        sum += a.at(c[i], c[j]);
        ++pairs;
      }
  }
  if (pairs == 0) return 0.0;
  return sum / static_cast<double>(pairs);
}

inline constexpr double kKneeThreshold = 0.10;

// Cuts the hierarchy into k clusters for k in [m, M]. With m == M the cut is
// forced; otherwise k is chosen by the elbow rule: stop at the first k whose
// relative drop in mean intra-cluster dissimilarity toward k+1 falls under
// the knee threshold.
inline std::vector<std::vector<std::size_t>> split(const Hierarchy& h,
                                                   const DissimilarityMatrix& a, int m,
                                                   int M) {
  if (m < 1 || M < m) throw UsageError("need 1 <= m <= M for hierarchy splitting");
  const std::size_t lo = std::min<std::size_t>(static_cast<std::size_t>(m), h.leaves);
  const std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(M), h.leaves);
  if (lo >= hi) return h.cut(hi);

  auto clusters = h.cut(lo);
  double value = mean_intra_dissimilarity(clusters, a);
  for (std::size_t k = lo; k < hi; ++k) {
    auto next = h.cut(k + 1);
    double next_value = mean_intra_dissimilarity(next, a);
    double drop;
    if (std::isinf(value)) {
      drop = 1.0;  // any cluster still unexplainable: keep splitting
    } else if (value <= 0.0) {
      drop = 0.0;
    } else {
      drop = (value - next_value) / value;
    }
    if (drop < kKneeThreshold) return clusters;
    clusters = std::move(next);
    value = next_value;
  }
  return clusters;
}

}  // namespace patprof
