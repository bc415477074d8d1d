#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "patprof/profiler.hpp"

namespace patprof {

// Partitions of a profile ordered by mutual dissimilarity: first the
// cheapest-to-describe partition, then repeatedly the one whose closest
// already-chosen partition needs the costliest joint pattern. Ties break by
// entry index.
struct PartitionOrder {
  std::vector<std::size_t> order;      // entry indices
  std::vector<double> step_costs;      // per-step max-min joint cost trace
};

inline PartitionOrder order_partitions(const Profile& profile, const AtomUniverse& u,
                                       const LearnOptions& opts = {}) {
  if (profile.entries.empty()) throw UsageError("cannot order an empty profile");
  const std::size_t n = profile.entries.size();
  PartitionOrder result;

  std::map<std::pair<std::size_t, std::size_t>, double> joint;
  auto joint_cost = [&](std::size_t i, std::size_t j) {
    std::pair<std::size_t, std::size_t> key{std::min(i, j), std::max(i, j)};
    auto it = joint.find(key);
    if (it != joint.end()) return it->second;
    std::vector<Str> merged = profile.entries[i].data;
    merged.insert(merged.end(), profile.entries[j].data.begin(),
                  profile.entries[j].data.end());
    double cost;
    try {
      cost = learn_best_pattern(merged, u, opts).cost;
    } catch (const CapacityError&) {
      cost = kInfiniteCost;  // unlearnable unions count as maximally dissimilar
    }
    joint.emplace(key, cost);
    return cost;
  };

  std::size_t first = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (profile.entries[i].cost < profile.entries[first].cost) first = i;
  result.order.push_back(first);
  result.step_costs.push_back(profile.entries[first].cost);

  std::vector<bool> chosen(n, false);
  chosen[first] = true;
  while (result.order.size() < n) {
    std::size_t best = n;
    double best_score = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (chosen[i]) continue;
      double closest = kInfiniteCost;
      for (std::size_t j : result.order) closest = std::min(closest, joint_cost(i, j));
      if (closest > best_score) {
        best_score = closest;
        best = i;
      }
    }
    chosen[best] = true;
    result.order.push_back(best);
    result.step_costs.push_back(best_score);
  }
  return result;
}

// Round-robin significant-input picker: cycles over the ordered partitions,
// drawing a seeded-random unlabeled string from each; exhausted partitions
// are skipped. Each partition uses its own derived random stream, so a pick
// in one partition never disturbs the others.
class SignificantPicker {
 public:
  SignificantPicker(const Profile& profile, const PartitionOrder& order,
                    std::uint64_t seed) {
    for (std::size_t step = 0; step < order.order.size(); ++step) {
      std::size_t idx = order.order[step];
      partitions_.push_back(profile.entries[idx].data);
      rngs_.emplace_back(Rng::substream(seed, idx));
    }
  }

  std::optional<Str> next() {
    const std::size_t parts = partitions_.size();
    for (std::size_t attempts = 0; attempts < parts; ++attempts) {
      auto& bucket = partitions_[cursor_];
      Rng& rng = rngs_[cursor_];
      cursor_ = (cursor_ + 1) % parts;
      if (bucket.empty()) continue;
      std::size_t pick = rng.below(bucket.size());
      Str out = bucket[pick];
      bucket.erase(bucket.begin() + static_cast<std::ptrdiff_t>(pick));
      return out;
    }
    return std::nullopt;  // every string labeled
  }

  // Marks a string as already labeled so next() never returns it.
  void mark_labeled(const Str& s) {
    for (auto& bucket : partitions_) {
      for (std::size_t i = 0; i < bucket.size(); ++i) {
        if (bucket[i] == s) {
          bucket.erase(bucket.begin() + static_cast<std::ptrdiff_t>(i));
          return;
        }
      }
    }
  }

 private:
  std::vector<std::vector<Str>> partitions_;
  std::vector<Rng> rngs_;
  std::size_t cursor_ = 0;
};

}  // namespace patprof
