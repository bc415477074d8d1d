#pragma once

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "patprof/cache.hpp"
#include "patprof/ingest.hpp"
#include "patprof/output.hpp"
#include "patprof/significant.hpp"

namespace patprof {

// Dissimilarity matrices are dense; past this many distinct strings a full
// re-clustering is refused rather than silently eating memory.
inline constexpr std::size_t kRefineLeafCap = 4000;

struct RunConfig {
  std::string input;
  std::optional<std::string> column;
  bool newline_mode = false;
  std::optional<std::string> atoms_path;
  ApproxParams params;
  enum class Format { Text, Structured } format = Format::Text;
  std::optional<std::string> cache_path;
  std::size_t state_budget = kDefaultStateBudget;
};

struct CmdResult {
  std::string out;
  std::string warn;
};

inline std::size_t state_budget_from_env(std::size_t fallback = kDefaultStateBudget) {
  const char* env = std::getenv("PATPROF_STATE_BUDGET");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || v == 0)
    throw ConfigError("PATPROF_STATE_BUDGET must be a positive integer");
  return static_cast<std::size_t>(v);
}

namespace detail {

inline AtomUniverse universe_for(const RunConfig& cfg) {
  if (cfg.atoms_path) return load_universe(*cfg.atoms_path);
  return AtomUniverse::defaults();
}

inline std::vector<Str> ingest_for(const RunConfig& cfg) {
  if (cfg.newline_mode && cfg.column)
    throw UsageError("--newline-mode and --column are mutually exclusive");
  IngestOptions opts;
  opts.column = cfg.column;
  opts.newline_mode = cfg.newline_mode;
  return ingest(cfg.input, opts);
}

// Deterministic full-dataset hierarchy used by refinement and the cache.
// Runs on its own random substream so it reproduces exactly regardless of
// what profiling consumed from the main stream.
inline CachedHierarchy build_refine_hierarchy(const std::vector<Str>& strings,
                                              const RunConfig& cfg,
                                              const AtomUniverse& u) {
  std::vector<Str> distinct = dedupe(strings);
  if (distinct.size() > kRefineLeafCap)
    throw DataError("refinement over " + std::to_string(distinct.size()) +
                    " distinct strings exceeds the supported limit (" +
                    std::to_string(kRefineLeafCap) + ")");
  LearnOptions lopts{cfg.state_budget};
  Rng rng(Rng::substream(cfg.params.seed, 1));
  const auto m_hat = static_cast<std::size_t>(
      std::ceil(cfg.params.theta * static_cast<double>(cfg.params.max_patterns)));
  PairCache cache = sample_dissimilarities(distinct, m_hat, u, rng, lopts);
  DissimilarityMatrix matrix = approx_dmatrix(distinct, cache, u, lopts);

  CachedHierarchy out;
  out.dataset_hash = dataset_hash(strings);
  out.universe_fingerprint = u.fingerprint();
  out.params = cfg.params;
  out.leaves = std::move(distinct);
  out.hierarchy = ahc(matrix);
  return out;
}

inline CmdResult render(const RunConfig& cfg, const Profile& p, std::string warn = {}) {
  CmdResult r;
  r.warn = std::move(warn);
  if (cfg.format == RunConfig::Format::Text) {
    r.out = render_text(p);
  } else {
    r.out = render_structured(p).dump(2);
    r.out.push_back('\n');
  }
  return r;
}

}  // namespace detail

// patprof profile: ingest, run the sample-profile-filter loop, render, and
// optionally persist the hierarchy for later refinement.
inline CmdResult cmd_profile(const RunConfig& cfg) {
  cfg.params.validate();
  AtomUniverse u = detail::universe_for(cfg);
  std::vector<Str> strings = detail::ingest_for(cfg);
  if (strings.empty()) {
    Profile empty;
    empty.params = cfg.params;
    empty.universe_fingerprint = u.fingerprint();
    return detail::render(cfg, empty, "warning: empty dataset, emitting empty profile\n");
  }
  LearnOptions lopts{cfg.state_budget};
  Rng rng(Rng::substream(cfg.params.seed, 0));
  Profile p = big_profile(strings, cfg.params, u, rng, lopts);
  if (cfg.cache_path) {
    CachedHierarchy cache = detail::build_refine_hierarchy(strings, cfg, u);
    save_cache(*cfg.cache_path, cache);
  }
  return detail::render(cfg, p);
}

// patprof refine --k: cut the cached hierarchy (or an identical recompute)
// into exactly k clusters and relearn per-cluster patterns.
inline CmdResult cmd_refine(const RunConfig& cfg, int k) {
  cfg.params.validate();
  if (k < 1) throw UsageError("refine needs k >= 1");
  AtomUniverse u = detail::universe_for(cfg);
  std::vector<Str> strings = detail::ingest_for(cfg);
  if (strings.empty()) throw DataError("cannot refine an empty dataset");
  LearnOptions lopts{cfg.state_budget};

  CachedHierarchy hierarchy;
  bool have = false;
  if (cfg.cache_path) {
    if (auto cached = load_cache(*cfg.cache_path)) {
      if (cached->dataset_hash != dataset_hash(strings))
        throw StaleCacheError("cache " + *cfg.cache_path +
                              " was built for different data; re-run profile");
      if (cached->universe_fingerprint != u.fingerprint())
        throw StaleCacheError("cache " + *cfg.cache_path +
                              " was built with a different atom universe; re-run profile");
      hierarchy = std::move(*cached);
      have = true;
    }
  }
  if (!have) {
    hierarchy = detail::build_refine_hierarchy(strings, cfg, u);
    if (cfg.cache_path) save_cache(*cfg.cache_path, hierarchy);
  }

  std::unordered_map<Str, std::size_t> occurrences;
  for (const Str& s : strings) ++occurrences[s];
  auto occ = [&occurrences](const Str& s) -> std::size_t {
    auto it = occurrences.find(s);
    return it == occurrences.end() ? 0 : it->second;
  };

  const std::size_t kk =
      std::min<std::size_t>(static_cast<std::size_t>(k), hierarchy.leaves.size());
  auto clusters = hierarchy.hierarchy.cut(kk);
  Profile p;
  for (const auto& cluster : clusters) {
    std::vector<Str> members;
    members.reserve(cluster.size());
    for (std::size_t leaf : cluster) members.push_back(hierarchy.leaves[leaf]);
    detail::emit_cluster(std::move(members), u, lopts, occ, p.entries);
  }
  p.params = cfg.params;
  p.params.min_patterns = k;
  p.params.max_patterns = k;
  p.universe_fingerprint = u.fingerprint();
  return detail::render(cfg, p);
}

// patprof suggest-examples --n: profile, order partitions by mutual
// dissimilarity, then emit representative strings round-robin.
inline CmdResult cmd_suggest_examples(const RunConfig& cfg, int n) {
  cfg.params.validate();
  if (n < 1) throw UsageError("suggest-examples needs n >= 1");
  AtomUniverse u = detail::universe_for(cfg);
  std::vector<Str> strings = detail::ingest_for(cfg);
  if (strings.empty()) throw DataError("cannot suggest examples from an empty dataset");
  LearnOptions lopts{cfg.state_budget};
  Rng rng(Rng::substream(cfg.params.seed, 0));
  Profile p = big_profile(strings, cfg.params, u, rng, lopts);

  PartitionOrder order = order_partitions(p, u, lopts);
  SignificantPicker picker(p, order, cfg.params.seed);
  std::vector<Str> picks;
  for (int i = 0; i < n; ++i) {
    auto s = picker.next();
    if (!s) break;  // everything labeled
    picks.push_back(std::move(*s));
  }

  CmdResult r;
  if (cfg.format == RunConfig::Format::Text) {
    for (const Str& s : picks) {
      r.out += u32_to_utf8(s);
      r.out.push_back('\n');
    }
  } else {
    nlohmann::json doc;
    doc["params"] = params_json(cfg.params, u.fingerprint());
    auto& examples = doc["examples"] = nlohmann::json::array();
    for (const Str& s : picks) examples.push_back(u32_to_utf8(s));
    r.out = doc.dump(2);
    r.out.push_back('\n');
  }
  return r;
}

}  // namespace patprof
