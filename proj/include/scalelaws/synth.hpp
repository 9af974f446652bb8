#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scalelaws/detail/rng.hpp"
#include "scalelaws/image_cube.hpp"

namespace scalelaws {

// Two-channel gradient image: channel 0 = x + y, channel 1 = n + y - x.
// Every pixel's pair is unique (x and y are recoverable from sum and
// difference), so the census fraction is exactly 1. Dynamics 2n.
inline ImageCube gen_plane(std::int64_t n) {
  if (n < 2) throw std::invalid_argument("gen_plane: n must be >= 2");
  ImageCube im = make_cube(n, n, 2, static_cast<double>(2 * n));
  for (std::int64_t y = 0; y < n; ++y)
    for (std::int64_t x = 0; x < n; ++x) {
      im.at(x, y, 0) = static_cast<double>(x + y);
      im.at(x, y, 1) = static_cast<double>(n + y - x);
    }
  return im;
}

// Two-channel image holding every pair (a, b) with 0 <= a, b < n exactly
// once, at seeded uniformly random positions (Fisher-Yates shuffle driven by
// splitmix64). Dynamics n; census fraction exactly 1.
inline ImageCube gen_random(std::int64_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_random: n must be >= 2");
  const std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  std::vector<std::uint64_t> perm(total);
  for (std::size_t i = 0; i < total; ++i) perm[i] = i;
  detail::SplitMix64 rng(seed);
  for (std::size_t i = total - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(
        rng.bounded(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  ImageCube im = make_cube(n, n, 2, static_cast<double>(n));
  for (std::size_t i = 0; i < total; ++i) {
    const std::uint64_t v = perm[i];
    im.data[2 * i] = static_cast<double>(v / static_cast<std::uint64_t>(n));
    im.data[2 * i + 1] = static_cast<double>(v % static_cast<std::uint64_t>(n));
  }
  return im;
}

namespace detail {

// The 24 permutations of {0,1,2,3} in lexicographic order; random draws
// index this table so the construction is fixed by this file, not by any
// library shuffle.
inline constexpr std::array<std::array<int, 4>, 24> kPerms4 = {{
    {0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 1, 3}, {0, 2, 3, 1}, {0, 3, 1, 2},
    {0, 3, 2, 1}, {1, 0, 2, 3}, {1, 0, 3, 2}, {1, 2, 0, 3}, {1, 2, 3, 0},
    {1, 3, 0, 2}, {1, 3, 2, 0}, {2, 0, 1, 3}, {2, 0, 3, 1}, {2, 1, 0, 3},
    {2, 1, 3, 0}, {2, 3, 0, 1}, {2, 3, 1, 0}, {3, 0, 1, 2}, {3, 0, 2, 1},
    {3, 1, 0, 2}, {3, 1, 2, 0}, {3, 2, 0, 1}, {3, 2, 1, 0},
}};

}  // namespace detail

// Recursive 4-way subdivision value field mapped to two channels.
//
// Starting from a single cell of value 0, each refinement splits every cell
// of value v into a 2x2 block of values 4v + P[q], q = 2*dy + dx, where P is
// a permutation of {0,1,2,3}: the identity when not randomized, a fresh draw
// per cell (stream keyed by refinement level and cell value, so independent
// of traversal order) when randomized, or one draw per level with
// `per_level`. After m levels the N x N field f (N = 2^m) is a bijection
// onto [0, N*N); channels: ch0 = floor(f/N) + (f mod N),
// ch1 = N + floor(f/N) - (f mod N). Dynamics 2N.
inline ImageCube gen_hilbert(int m, std::uint64_t seed, bool randomized,
                             bool per_level = false) {
  if (m < 1) throw std::invalid_argument("gen_hilbert: m must be >= 1");
  if (m > 14) throw std::invalid_argument("gen_hilbert: m too large");
  std::vector<std::int64_t> f = {0};
  std::int64_t side = 1;
  for (int level = 0; level < m; ++level) {
    const std::int64_t ns = side * 2;
    std::vector<std::int64_t> next(static_cast<std::size_t>(ns) * ns);
    std::array<int, 4> level_perm = detail::kPerms4[0];
    if (randomized && per_level) {
      detail::SplitMix64 rng(detail::split_stream(
          seed, static_cast<std::uint64_t>(level), 0));
      level_perm = detail::kPerms4[static_cast<std::size_t>(rng.bounded(24))];
    }
    for (std::int64_t y = 0; y < side; ++y) {
      for (std::int64_t x = 0; x < side; ++x) {
        const std::int64_t v = f[static_cast<std::size_t>(y * side + x)];
        std::array<int, 4> p = level_perm;
        if (randomized && !per_level) {
          detail::SplitMix64 rng(detail::split_stream(
              seed, static_cast<std::uint64_t>(level),
              static_cast<std::uint64_t>(v)));
          p = detail::kPerms4[static_cast<std::size_t>(rng.bounded(24))];
        }
        for (int dy = 0; dy < 2; ++dy)
          for (int dx = 0; dx < 2; ++dx)
            next[static_cast<std::size_t>((2 * y + dy) * ns + (2 * x + dx))] =
                4 * v + p[static_cast<std::size_t>(2 * dy + dx)];
      }
    }
    f = std::move(next);
    side = ns;
  }
  const std::int64_t n = side;
  ImageCube im = make_cube(n, n, 2, static_cast<double>(2 * n));
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::int64_t q = f[i] / n;
    const std::int64_t r = f[i] % n;
    im.data[2 * i] = static_cast<double>(q + r);
    im.data[2 * i + 1] = static_cast<double>(n + q - r);
  }
  return im;
}

namespace detail {

inline constexpr std::array<std::int64_t, 8> kMotifRowA = {0, 0, 0, 1,
                                                           1, 0, 0, 2};
inline constexpr std::array<std::int64_t, 8> kMotifRowB = {0, 0, 1, 0,
                                                           0, 2, 1, 3};

}  // namespace detail

// Single-channel periodic tiling whose 2x2 blocks realize all seven pattern
// classes in equal interior counts. The leftmost 2x8 window is the base
// motif verbatim (rows A = 0,0,0,1,1,0,0,2 and B = 0,0,1,0,0,2,1,3,
// alternating down the image). Each further 8-column period is the mirror
// image of its left neighbor under an injective relabeling; the relabelings
// cycle the classes produced at the seams, which keeps the seven class
// frequencies balanced where plain repetition would pile every seam into
// one class. Requires rows a multiple of 2 and cols a multiple of 8.
inline ImageCube gen_pavement(std::int64_t rows, std::int64_t cols) {
  if (rows < 2 || cols < 8 || rows % 2 != 0 || cols % 8 != 0)
    throw std::invalid_argument(
        "gen_pavement: need rows multiple of 2 (>=2), cols multiple of 8 (>=8)");
  const std::int64_t nblocks = cols / 8;

  // Build the two distinct rows, one 2x8 block at a time.
  std::vector<std::array<std::int64_t, 8>> block = {detail::kMotifRowA,
                                                    detail::kMotifRowB};
  std::vector<std::int64_t> top(static_cast<std::size_t>(cols));
  std::vector<std::int64_t> bottom(static_cast<std::size_t>(cols));
  auto emit = [&](std::int64_t b) {
    for (std::int64_t i = 0; i < 8; ++i) {
      top[static_cast<std::size_t>(b * 8 + i)] = block[0][static_cast<std::size_t>(i)];
      bottom[static_cast<std::size_t>(b * 8 + i)] = block[1][static_cast<std::size_t>(i)];
    }
  };
  emit(0);

  // Seam-class cycles: the two columns meeting at a block boundary form
  // quads (t, phi(t), phi(u), u) — with (t, u) the previous block's last
  // column — so the relabeling phi dictates the seam's class.
  const std::array<std::string, 4> distinct_kinds = {"0101", "0012", "0102",
                                                     "0123"};
  const std::array<std::string, 2> equal_kinds = {"0000", "0011"};
  std::int64_t fresh = 4;
  std::size_t d_i = 0, e_i = 0;
  for (std::int64_t b = 1; b < nblocks; ++b) {
    const std::int64_t t = block[0][7];
    const std::int64_t u = block[1][7];
    // Injective relabeling, default identity on the block's four labels.
    std::array<std::pair<std::int64_t, std::int64_t>, 4> map{};
    {
      std::array<std::int64_t, 4> labels{};
      std::size_t nl = 0;
      for (int r = 0; r < 2; ++r)
        for (std::int64_t v : block[static_cast<std::size_t>(r)]) {
          bool seen = false;
          for (std::size_t i = 0; i < nl; ++i)
            if (labels[i] == v) seen = true;
          if (!seen) {
            if (nl == 4)
              throw std::logic_error("gen_pavement: block must carry 4 labels");
            labels[nl++] = v;
          }
        }
      if (nl != 4)
        throw std::logic_error("gen_pavement: block must carry 4 labels");
      for (std::size_t i = 0; i < 4; ++i) map[i] = {labels[i], labels[i]};
    }
    auto set_phi = [&](std::int64_t from, std::int64_t to) {
      for (auto& kv : map)
        if (kv.first == from) kv.second = to;
    };
    if (t != u) {
      const std::string& kind = distinct_kinds[d_i % distinct_kinds.size()];
      ++d_i;
      if (kind == "0101") {
        set_phi(t, u);
        set_phi(u, t);
      } else if (kind == "0012") {
        set_phi(u, fresh++);
      } else if (kind == "0102") {
        set_phi(t, fresh++);
        set_phi(u, t);
      } else {  // 0123
        set_phi(t, fresh++);
        set_phi(u, fresh++);
      }
    } else {
      const std::string& kind = equal_kinds[e_i % equal_kinds.size()];
      ++e_i;
      if (kind == "0011") set_phi(t, fresh++);
      // "0000": identity keeps the seam constant.
    }
    auto apply = [&](std::int64_t v) {
      for (const auto& kv : map)
        if (kv.first == v) return kv.second;
      throw std::logic_error("gen_pavement: unmapped label");
    };
    std::vector<std::array<std::int64_t, 8>> mirrored = block;
    for (int r = 0; r < 2; ++r)
      for (std::int64_t i = 0; i < 8; ++i)
        mirrored[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] =
            apply(block[static_cast<std::size_t>(r)][static_cast<std::size_t>(7 - i)]);
    block = std::move(mirrored);
    emit(b);
  }

  std::int64_t max_label = 0;
  for (std::int64_t v : top) max_label = std::max(max_label, v);
  for (std::int64_t v : bottom) max_label = std::max(max_label, v);
  ImageCube im =
      make_cube(cols, rows, 1, static_cast<double>(max_label + 1));
  for (std::int64_t y = 0; y < rows; ++y) {
    const std::vector<std::int64_t>& src = (y % 2 == 0) ? top : bottom;
    for (std::int64_t x = 0; x < cols; ++x)
      im.at(x, y, 0) = static_cast<double>(src[static_cast<std::size_t>(x)]);
  }
  return im;
}

}  // namespace scalelaws
