#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scalelaws/cascade.hpp"
#include "scalelaws/entropy.hpp"
#include "scalelaws/image_cube.hpp"
#include "scalelaws/necklace.hpp"
#include "scalelaws/parallel.hpp"

namespace scalelaws {

enum class DeltaMode { color, pattern };

// Exponential averages of the entropy increments along the scale cascade at
// one bin width k. `plus`/`minus` divide by the number of increments
// actually summed; `alt_plus`/`alt_minus` divide by (N/2 - 1), the
// normalization used by the trajectory-count convention (for the pattern
// cascade of an N x N image the two differ: N/2 increments are summed).
struct OmegaPair {
  std::int64_t k = 0;
  double plus = 0.0;
  double minus = 0.0;
  double alt_plus = 0.0;
  double alt_minus = 0.0;
  std::int64_t n_terms = 0;
};

namespace detail {

inline void require_square(const ImageCube& im, std::int64_t min_side) {
  require_analysis_cube(im);
  if (im.width != im.height)
    throw std::invalid_argument(
        "fluctuation statistics require a square image; crop first");
  if (im.width < min_side)
    throw std::invalid_argument(
        "fluctuation statistics require side >= " + std::to_string(min_side));
}

// Entropy at one cascade level from an already-reduced image.
inline double level_entropy(const ImageCube& reduced, std::int64_t k,
                            DeltaMode mode) {
  const ImageCube level = quantize(reduced, k);
  if (mode == DeltaMode::color) return shannon_entropy(level);
  // A level with no complete 2x2 block carries zero pattern entropy.
  if (level.width < 2 || level.height < 2) return 0.0;
  return pattern_entropy(pattern_counts(level));
}

// Block reductions of `im` for s = 1..s_top, index [s-1].
inline std::vector<ImageCube> reduction_pyramid(const ImageCube& im,
                                                std::int64_t s_top) {
  std::vector<ImageCube> levels;
  levels.reserve(static_cast<std::size_t>(s_top));
  for (std::int64_t s = 1; s <= s_top; ++s)
    levels.push_back(block_reduce(im, s));
  return levels;
}

inline OmegaPair omega_from_series(std::int64_t k,
                                   const std::vector<double>& series,
                                   std::int64_t alt_terms) {
  OmegaPair om;
  om.k = k;
  om.n_terms = static_cast<std::int64_t>(series.size()) - 1;
  double sum_plus = 0.0;
  double sum_minus = 0.0;
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    const double d = series[i + 1] - series[i];
    sum_plus += std::exp(d);
    sum_minus += std::exp(-d);
  }
  const double cn = static_cast<double>(om.n_terms);
  om.plus = sum_plus / cn;
  om.minus = sum_minus / cn;
  // Degenerate cascades (a single increment) fall back to the count
  // normalization rather than dividing by zero.
  const double pn =
      alt_terms > 0 ? static_cast<double>(alt_terms) : cn;
  om.alt_plus = sum_plus / pn;
  om.alt_minus = sum_minus / pn;
  return om;
}

}  // namespace detail

// Color entropy of the k-binned cascade at every scale s = 1..N for a
// square N x N image, N >= 3 (the s = N level is a single pixel, entropy 0).
inline std::vector<double> color_entropy_series(const ImageCube& im,
                                                std::int64_t k) {
  detail::require_square(im, 3);
  const auto levels = detail::reduction_pyramid(im, im.width);
  std::vector<double> series;
  series.reserve(levels.size());
  for (const ImageCube& r : levels)
    series.push_back(detail::level_entropy(r, k, DeltaMode::color));
  return series;
}

// Pattern entropy of the k-binned cascade at every scale s = 1..N/2+1 for a
// square N x N image, N >= 6.
inline std::vector<double> pattern_entropy_series(const ImageCube& im,
                                                  std::int64_t k) {
  detail::require_square(im, 6);
  const auto levels = detail::reduction_pyramid(im, im.width / 2 + 1);
  std::vector<double> series;
  series.reserve(levels.size());
  for (const ImageCube& r : levels)
    series.push_back(detail::level_entropy(r, k, DeltaMode::pattern));
  return series;
}

// Scale-to-scale entropy increments of the chosen cascade: entry (s, d) is
// d = S(s+1) - S(s), the exact summands of the omega statistics.
inline std::vector<std::pair<std::int64_t, double>> delta_entropy_series(
    const ImageCube& im, std::int64_t k, DeltaMode mode) {
  const std::vector<double> series = mode == DeltaMode::color
                                         ? color_entropy_series(im, k)
                                         : pattern_entropy_series(im, k);
  std::vector<std::pair<std::int64_t, double>> deltas;
  deltas.reserve(series.size() - 1);
  for (std::size_t i = 0; i + 1 < series.size(); ++i)
    deltas.emplace_back(static_cast<std::int64_t>(i) + 1,
                        series[i + 1] - series[i]);
  return deltas;
}

// Integral fluctuation statistic over the color cascade (s = 1..N).
inline OmegaPair omega_image(const ImageCube& im, std::int64_t k) {
  const std::vector<double> series = color_entropy_series(im, k);
  return detail::omega_from_series(k, series, im.width - 1);
}

// Integral fluctuation statistic over the pattern cascade (s = 1..N/2+1).
inline OmegaPair omega_patterns(const ImageCube& im, std::int64_t k) {
  const std::vector<double> series = pattern_entropy_series(im, k);
  return detail::omega_from_series(k, series, im.width / 2 - 1);
}

// omega_patterns for every k in k_grid. The reduction pyramid is built once
// and shared read-only; each k is an independent work item with its own
// output slot, so results are bitwise identical for every thread count.
inline std::vector<OmegaPair> omega_patterns_sweep(
    const ImageCube& im, const std::vector<std::int64_t>& k_grid,
    unsigned threads = 0) {
  detail::require_square(im, 6);
  for (const std::int64_t k : k_grid)
    if (k < 1)
      throw std::invalid_argument("omega_patterns_sweep: k must be >= 1");
  const auto levels = detail::reduction_pyramid(im, im.width / 2 + 1);
  std::vector<OmegaPair> out(k_grid.size());
  parallel_for(k_grid.size(), threads, [&](std::size_t i) {
    std::vector<double> series;
    series.reserve(levels.size());
    for (const ImageCube& r : levels)
      series.push_back(detail::level_entropy(r, k_grid[i], DeltaMode::pattern));
    out[i] = detail::omega_from_series(k_grid[i], series, im.width / 2 - 1);
  });
  return out;
}

}  // namespace scalelaws
