#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "patprof/clustering.hpp"

namespace patprof {

struct ProfileEntry {
  std::vector<Str> data;  // distinct strings of this partition
  Pattern pattern;        // describes every string in data
  double cost = 0.0;      // pattern_cost(pattern, data)
  std::size_t count = 0;  // matched occurrences, duplicates included
};

struct Profile {
  std::vector<ProfileEntry> entries;
  ApproxParams params;
  std::uint64_t universe_fingerprint = 0;
};

namespace detail {

using OccurrenceFn = std::function<std::size_t(const Str&)>;

inline std::size_t total_count(const ProfileEntry& e) { return e.count; }

// Turns one cluster of strings into profile entries. Empty strings always
// get their own Empty entry; a learner capacity failure degrades the cluster
// to constant singletons so coverage is preserved.
inline void emit_cluster(std::vector<Str> cluster, const AtomUniverse& u,
                         const LearnOptions& opts, const OccurrenceFn& occ,
                         std::vector<ProfileEntry>& out) {
  std::vector<Str> nonempty;
  bool has_empty = false;
  for (auto& s : cluster) {
    if (s.empty())
      has_empty = true;
    else
      nonempty.push_back(std::move(s));
  }
  if (has_empty) {
    ProfileEntry e;
    e.data.emplace_back();
    e.pattern = Pattern();
    e.cost = 0.0;
    e.count = occ(Str());
    out.push_back(std::move(e));
  }
  if (nonempty.empty()) return;

  BestPattern bp;
  bool capacity = false;
  try {
    bp = learn_best_pattern(nonempty, u, opts);
  } catch (const CapacityError&) {
    capacity = true;
  }
  if (!capacity && !bp.is_bottom()) {
    ProfileEntry e;
    e.pattern = *bp.pattern;
    e.cost = bp.cost;
    for (auto& s : nonempty) {
      e.count += occ(s);
      e.data.push_back(std::move(s));
    }
    out.push_back(std::move(e));
    return;
  }
  // no common pattern: one constant entry per string
  for (auto& s : nonempty) {
    ProfileEntry e;
    e.pattern = Pattern({u.constant(s)});
    e.cost = pattern_cost_total(e.pattern, std::span<const Str>(&s, 1));
    e.count = occ(s);
    e.data.push_back(std::move(s));
    out.push_back(std::move(e));
  }
}

}  // namespace detail

// Repeatedly merges the pair of entries whose union admits the cheapest
// pattern until at most max_entries remain. Pairs with no joint pattern
// (infinite cost) are never merged; if only such pairs remain the profile is
// left larger than requested.
inline void compress_profile(std::vector<ProfileEntry>& entries, std::size_t max_entries,
                             const AtomUniverse& u, const LearnOptions& opts = {}) {
  if (max_entries < 1) throw UsageError("profile compression needs max_entries >= 1");
  std::uint64_t next_uid = 0;
  std::vector<std::uint64_t> uid(entries.size());
  for (auto& id : uid) id = next_uid++;
  std::map<std::pair<std::uint64_t, std::uint64_t>, BestPattern> joint;

  auto joint_best = [&](std::size_t i, std::size_t j) -> const BestPattern& {
    auto key = std::make_pair(std::min(uid[i], uid[j]), std::max(uid[i], uid[j]));
    auto it = joint.find(key);
    if (it != joint.end()) return it->second;
    std::vector<Str> merged;
    merged.reserve(entries[i].data.size() + entries[j].data.size());
    merged.insert(merged.end(), entries[i].data.begin(), entries[i].data.end());
    merged.insert(merged.end(), entries[j].data.begin(), entries[j].data.end());
    BestPattern bp;
    try {
      bp = learn_best_pattern(merged, u, opts);
    } catch (const CapacityError&) {
      bp = BestPattern::bottom();
    }
    return joint.emplace(key, std::move(bp)).first->second;
  };

  while (entries.size() > max_entries) {
    std::size_t bi = entries.size(), bj = entries.size();
    double best = kInfiniteCost;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      for (std::size_t j = i + 1; j < entries.size(); ++j) {
        double c = joint_best(i, j).cost;
        if (c < best) {
          best = c;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi == entries.size()) break;  // every remaining pair is unmergeable

    const BestPattern& bp = joint_best(bi, bj);
    ProfileEntry merged;
    merged.pattern = *bp.pattern;
    merged.cost = bp.cost;
    merged.count = entries[bi].count + entries[bj].count;
    merged.data = std::move(entries[bi].data);
    merged.data.insert(merged.data.end(),
                       std::make_move_iterator(entries[bj].data.begin()),
                       std::make_move_iterator(entries[bj].data.end()));
    entries[bi] = std::move(merged);
    uid[bi] = next_uid++;
    entries.erase(entries.begin() + static_cast<std::ptrdiff_t>(bj));
    uid.erase(uid.begin() + static_cast<std::ptrdiff_t>(bj));
  }
}

struct ChunkProfile {
  std::vector<ProfileEntry> entries;
  Hierarchy hierarchy;
  std::vector<Str> leaves;  // distinct strings, hierarchy leaf order
};

// Profiles one chunk: sample pairwise patterns, complete the dissimilarity
// matrix, cluster, cut within [m, M], then learn one pattern per cluster.
inline ChunkProfile profile_chunk(std::span<const Str> strings, int m, int M, double theta,
                                  const AtomUniverse& u, Rng& rng, const LearnOptions& opts,
                                  const detail::OccurrenceFn& occ) {
  if (strings.empty()) throw UsageError("cannot profile an empty dataset");
  if (m < 1 || M < m) throw UsageError("need 1 <= min-patterns <= max-patterns");
  if (theta < 1.0) throw UsageError("theta must be at least 1.0");

  ChunkProfile result;
  result.leaves = dedupe(strings);
  const auto m_hat =
      static_cast<std::size_t>(std::ceil(theta * static_cast<double>(M)));
  PairCache cache = sample_dissimilarities(result.leaves, m_hat, u, rng, opts);
  DissimilarityMatrix matrix = approx_dmatrix(result.leaves, cache, u, opts);
  result.hierarchy = ahc(matrix);
  auto clusters = split(result.hierarchy, matrix, m, M);

  for (const auto& cluster : clusters) {
    std::vector<Str> members;
    members.reserve(cluster.size());
    for (std::size_t leaf : cluster) members.push_back(result.leaves[leaf]);
    detail::emit_cluster(std::move(members), u, opts, occ, result.entries);
  }
  if (result.entries.size() > static_cast<std::size_t>(M))
    compress_profile(result.entries, static_cast<std::size_t>(M), u, opts);
  return result;
}

// Single-chunk profiling of a whole dataset (the Profile algorithm).
inline Profile profile(std::span<const Str> strings, int m, int M, double theta,
                       const AtomUniverse& u, Rng& rng, const LearnOptions& opts = {}) {
  std::unordered_map<Str, std::size_t> occurrences;
  for (const Str& s : strings) ++occurrences[s];
  auto occ = [&occurrences](const Str& s) -> std::size_t {
    auto it = occurrences.find(s);
    return it == occurrences.end() ? 0 : it->second;
  };
  ChunkProfile cp = profile_chunk(strings, m, M, theta, u, rng, opts, occ);
  Profile p;
  p.entries = std::move(cp.entries);
  p.params.min_patterns = m;
  p.params.max_patterns = M;
  p.params.theta = theta;
  p.universe_fingerprint = u.fingerprint();
  return p;
}

// Sample-profile-filter loop for datasets of any size: profile random chunks
// of ceil(mu*M) strings, merge into the running profile, compress to at most
// M entries, and drop strings the profile already describes. Afterwards every
// string is assigned to exactly one partition: sampled strings to the
// partition that produced them, filtered strings to the cheapest describing
// entry. Strings orphaned by merge re-learning fall back to constant
// singleton entries, so coverage always holds.
inline Profile big_profile(std::span<const Str> strings, const ApproxParams& params,
                           const AtomUniverse& u, Rng& rng, const LearnOptions& opts = {}) {
  params.validate();
  if (strings.empty()) throw UsageError("cannot profile an empty dataset");

  std::unordered_map<Str, std::size_t> occurrences;
  std::vector<Str> distinct;
  for (const Str& s : strings) {
    if (++occurrences[s] == 1) distinct.push_back(s);
  }
  auto occ = [&occurrences](const Str& s) -> std::size_t {
    auto it = occurrences.find(s);
    return it == occurrences.end() ? 0 : it->second;
  };

  const int m = params.min_patterns;
  const int M = params.max_patterns;
  const auto chunk_target = static_cast<std::size_t>(
      std::ceil(params.mu * static_cast<double>(M)));

  std::vector<ProfileEntry> entries;
  std::unordered_set<Str> placed;  // strings already owned by a partition
  std::vector<Str> remaining = distinct;
  while (!remaining.empty()) {
    std::vector<Str> chunk;
    if (remaining.size() <= chunk_target) {
      chunk = remaining;
    } else {
      std::vector<std::size_t> idx(remaining.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      for (std::size_t i = 0; i < chunk_target; ++i) {
        std::size_t j = i + rng.below(idx.size() - i);
        std::swap(idx[i], idx[j]);
      }
      idx.resize(chunk_target);
      std::sort(idx.begin(), idx.end());
      chunk.reserve(chunk_target);
      for (std::size_t i : idx) chunk.push_back(remaining[i]);
    }

    ChunkProfile cp = profile_chunk(chunk, m, M, params.theta, u, rng, opts, occ);
    for (auto& e : cp.entries) {
      for (const Str& s : e.data) placed.insert(s);
      entries.push_back(std::move(e));
    }
    compress_profile(entries, static_cast<std::size_t>(M), u, opts);

    // Patterned removal; sampled strings additionally stay removed even when
    // a later merge re-learned their entry's pattern past them.
    std::vector<Str> still;
    still.reserve(remaining.size());
    for (auto& s : remaining) {
      bool described = placed.find(s) != placed.end();
      for (std::size_t i = 0; !described && i < entries.size(); ++i)
        described = entries[i].pattern.describes(s);
      if (!described) still.push_back(std::move(s));
    }
    remaining = std::move(still);
  }

  // Final partition assignment for strings that were filtered out, never
  // sampled into a chunk.
  for (const Str& s : distinct) {
    if (placed.find(s) != placed.end()) continue;
    std::size_t best_entry = entries.size();
    double best_cost = kInfiniteCost;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const Pattern& p = entries[i].pattern;
      if (!p.describes(s)) continue;
      double c = pattern_cost_total(p, std::span<const Str>(&s, 1));
      if (c < best_cost) {
        best_cost = c;
        best_entry = i;
      }
    }
    if (best_entry == entries.size()) {
      ProfileEntry e;
      e.pattern = s.empty() ? Pattern() : Pattern({u.constant(s)});
      e.cost = s.empty() ? 0.0 : pattern_cost_total(e.pattern, std::span<const Str>(&s, 1));
      e.count = occ(s);
      e.data.push_back(s);
      entries.push_back(std::move(e));
    } else {
      entries[best_entry].data.push_back(s);
      entries[best_entry].count += occ(s);
    }
  }

  Profile p;
  p.entries = std::move(entries);
  p.params = params;
  p.universe_fingerprint = u.fingerprint();
  return p;
}

}  // namespace patprof
