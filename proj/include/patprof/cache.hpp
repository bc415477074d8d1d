#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#ifdef __unix__
#include <sys/file.h>
#include <unistd.h>
#include <fcntl.h>
#endif

#include "patprof/clustering.hpp"
#include "patprof/errors.hpp"

namespace patprof {

// On-disk dendrogram so a profiled dataset can be re-cut at any k without
// recomputation. Valid only while both the dataset hash and the atom
// universe fingerprint match. Heights round-trip through their exact bit
// patterns, which is what makes cut-from-cache byte-identical to recompute.
struct CachedHierarchy {
  std::uint64_t dataset_hash = 0;
  std::uint64_t universe_fingerprint = 0;
  ApproxParams params;
  std::vector<Str> leaves;
  Hierarchy hierarchy;
};

inline std::uint64_t dataset_hash(std::span<const Str> strings) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const Str& s : strings) {
    for (unsigned char c : u32_to_utf8(s)) {
      h ^= c;
      h *= 0x100000001B3ULL;
    }
    h ^= 0x1E;  // record separator, so ["a","b"] != ["ab"]
    h *= 0x100000001B3ULL;
  }
  return h;
}

namespace detail {

inline std::string double_bits_hex(double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(bits));
  return buf;
}

inline double double_from_bits_hex(const std::string& s) {
  std::uint64_t bits = std::strtoull(s.c_str(), nullptr, 16);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace detail

inline void save_cache(const std::filesystem::path& path, const CachedHierarchy& cache) {
  nlohmann::json doc;
  doc["version"] = 1;
  doc["dataset_hash"] = cache.dataset_hash;
  doc["universe_fingerprint"] = cache.universe_fingerprint;
  doc["params"] = {{"min_patterns", cache.params.min_patterns},
                   {"max_patterns", cache.params.max_patterns},
                   {"theta", cache.params.theta},
                   {"mu", cache.params.mu},
                   {"seed", cache.params.seed}};
  auto& leaves = doc["leaves"] = nlohmann::json::array();
  for (const Str& s : cache.leaves) leaves.push_back(u32_to_utf8(s));
  auto& merges = doc["merges"] = nlohmann::json::array();
  for (const auto& m : cache.hierarchy.merges)
    merges.push_back({{"left", m.left},
                      {"right", m.right},
                      {"height_bits", detail::double_bits_hex(m.height)}});

#ifdef __unix__
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw DataError("cannot write cache file: " + path.string());
  ::flock(fd, LOCK_EX);  // advisory: one writer at a time
  std::string body = doc.dump(2);
  body.push_back('\n');
  ssize_t written = ::write(fd, body.data(), body.size());
  ::flock(fd, LOCK_UN);
  ::close(fd);
  if (written != static_cast<ssize_t>(body.size()))
    throw DataError("short write to cache file: " + path.string());
#else
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write cache file: " + path.string());
  out << doc.dump(2) << "\n";
#endif
}

// nullopt when the file does not exist; DataError when it is unreadable.
inline std::optional<CachedHierarchy> load_cache(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read cache file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
    CachedHierarchy cache;
    if (doc.at("version").get<int>() != 1)
      throw DataError("unsupported cache version in " + path.string());
    cache.dataset_hash = doc.at("dataset_hash").get<std::uint64_t>();
    cache.universe_fingerprint = doc.at("universe_fingerprint").get<std::uint64_t>();
    const auto& p = doc.at("params");
    cache.params.min_patterns = p.at("min_patterns").get<int>();
    cache.params.max_patterns = p.at("max_patterns").get<int>();
    cache.params.theta = p.at("theta").get<double>();
    cache.params.mu = p.at("mu").get<double>();
    cache.params.seed = p.at("seed").get<std::uint64_t>();
    for (const auto& leaf : doc.at("leaves")) {
      auto u32 = utf8_to_u32(leaf.get<std::string>());
      if (!u32) throw DataError("corrupt cache leaf in " + path.string());
      cache.leaves.push_back(std::move(*u32));
    }
    cache.hierarchy.leaves = cache.leaves.size();
    for (const auto& m : doc.at("merges")) {
      Hierarchy::Merge merge;
      merge.left = m.at("left").get<std::size_t>();
      merge.right = m.at("right").get<std::size_t>();
      merge.height = detail::double_from_bits_hex(m.at("height_bits").get<std::string>());
      cache.hierarchy.merges.push_back(merge);
    }
    return cache;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("corrupt cache file " + path.string() + ": " + e.what());
  }
}

}  // namespace patprof
