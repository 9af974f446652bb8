#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "scalelaws/detail/rng.hpp"

namespace scalelaws::detail {

// Hash of one pixel's channel tuple, built from the bit patterns of its
// samples. 0.0 is normalized so +0.0 and -0.0 hash alike (they compare
// equal as doubles).
inline std::uint64_t pixel_hash(const double* p, std::int64_t channels) {
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (std::int64_t c = 0; c < channels; ++c) {
    const double v = p[c];
    const std::uint64_t bits =
        v == 0.0 ? 0 : std::bit_cast<std::uint64_t>(v);
    h = mix64(h ^ bits);
  }
  return h;
}

inline bool pixel_equal(const double* a, const double* b,
                        std::int64_t channels) {
  for (std::int64_t c = 0; c < channels; ++c)
    if (a[c] != b[c]) return false;
  return true;
}

// Multiplicities of the distinct channel tuples among the `n` consecutive
// pixels starting at `base` (each `channels` doubles wide), in unspecified
// order. Open-addressing table keyed by pixel index, so no tuples are
// copied.
inline std::vector<std::uint64_t> color_counts(const double* base,
                                               std::size_t n,
                                               std::int64_t channels) {
  if (n >= std::numeric_limits<std::uint32_t>::max())
    throw std::length_error("color_counts: too many pixels");
  std::size_t cap = 16;
  while (cap < 2 * n) cap <<= 1;
  const std::size_t mask = cap - 1;
  constexpr std::uint32_t kEmpty = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> rep(cap, kEmpty);  // representative pixel index
  std::vector<std::uint64_t> cnt(cap, 0);

  const std::size_t C = static_cast<std::size_t>(channels);
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = base + i * C;
    std::size_t slot = pixel_hash(p, channels) & mask;
    for (;;) {
      if (rep[slot] == kEmpty) {
        rep[slot] = static_cast<std::uint32_t>(i);
        cnt[slot] = 1;
        break;
      }
      const double* q = base + static_cast<std::size_t>(rep[slot]) * C;
      if (pixel_equal(p, q, channels)) {
        ++cnt[slot];
        break;
      }
      slot = (slot + 1) & mask;
    }
  }

  std::vector<std::uint64_t> out;
  out.reserve(n / 4 + 16);
  for (std::size_t s = 0; s < cap; ++s)
    if (rep[s] != kEmpty) out.push_back(cnt[s]);
  return out;
}

}  // namespace scalelaws::detail
