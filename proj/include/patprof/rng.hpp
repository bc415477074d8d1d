#pragma once

#include <cstdint>

namespace patprof {

// Deterministic splitmix64 generator. Used everywhere instead of <random>
// so that seeded runs produce identical output on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform-ish value in [0, n); n must be > 0.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

  // Independent stream derived from a seed and a stream tag.
  static std::uint64_t substream(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ULL * (tag + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace patprof
