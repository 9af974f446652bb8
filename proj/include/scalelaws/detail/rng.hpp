#pragma once

#include <cstdint>

namespace scalelaws::detail {

// Finalizer of the splitmix64 generator; also used as a 64-bit mixing
// function for hashing.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic, platform-independent 64-bit generator (splitmix64).
// Chosen for reproducible synthetic images: the sequence for a given seed is
// fixed by this code, not by any standard-library implementation.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform value in [0, n) without modulo bias (rejection sampling).
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::uint64_t state_;
};

// Derives an independent stream seed from a base seed and two coordinates
// (e.g. recursion level and cell value), so that draws do not depend on
// traversal order.
inline std::uint64_t split_stream(std::uint64_t seed, std::uint64_t a,
                                  std::uint64_t b) {
  return mix64(seed ^ mix64(a ^ mix64(b)));
}

}  // namespace scalelaws::detail
