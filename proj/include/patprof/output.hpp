#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "patprof/profiler.hpp"

namespace patprof {

namespace detail {

// Entries listed by ascending match count, like the profile figures; ties
// break on the rendered pattern, then cost.
inline std::vector<std::size_t> display_order(const Profile& p) {
  std::vector<std::size_t> order(p.entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = p.entries[a];
    const auto& eb = p.entries[b];
    if (ea.count != eb.count) return ea.count < eb.count;
    std::string ha = ea.pattern.human(), hb = eb.pattern.human();
    if (ha != hb) return ha < hb;
    return ea.cost < eb.cost;
  });
  return order;
}

}  // namespace detail

inline std::string render_text(const Profile& p) {
  std::string out;
  for (std::size_t i : detail::display_order(p)) {
    const auto& e = p.entries[i];
    out += e.pattern.human();
    out += "  (";
    out += std::to_string(e.count);
    out += ")\n";
  }
  return out;
}

inline nlohmann::json params_json(const ApproxParams& params,
                                  std::uint64_t universe_fingerprint) {
  return {{"min_patterns", params.min_patterns},
          {"max_patterns", params.max_patterns},
          {"theta", params.theta},
          {"mu", params.mu},
          {"seed", params.seed},
          {"universe_fingerprint", universe_fingerprint}};
}

inline nlohmann::json render_structured(const Profile& p) {
  nlohmann::json doc;
  doc["params"] = params_json(p.params, p.universe_fingerprint);
  auto& entries = doc["entries"] = nlohmann::json::array();
  for (std::size_t i : detail::display_order(p)) {
    const auto& e = p.entries[i];
    nlohmann::json je;
    je["pattern_human"] = e.pattern.human();
    je["pattern_regex"] = e.pattern.regex();
    je["count"] = e.count;
    je["cost"] = e.cost;
    auto& samples = je["samples"] = nlohmann::json::array();
    for (std::size_t s = 0; s < e.data.size() && s < 5; ++s)
      samples.push_back(u32_to_utf8(e.data[s]));
    entries.push_back(std::move(je));
  }
  return doc;
}

}  // namespace patprof
