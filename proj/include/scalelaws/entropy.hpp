#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "scalelaws/cascade.hpp"
#include "scalelaws/image_cube.hpp"
#include "scalelaws/necklace.hpp"
#include "scalelaws/parallel.hpp"

namespace scalelaws {

// Shannon entropy (natural log) of a multiplicity vector:
//   S = ln T - (sum c*ln c)/T,  T = sum c.
// Zero multiplicities are ignored; an empty distribution has S = 0. The
// counts are sorted before summation, so the result is a fixed double for a
// given multiset — independent of input order and hence of any parallel
// schedule that produced it.
inline double entropy_from_counts(std::vector<std::uint64_t> counts) {
  std::erase(counts, 0);
  // A degenerate (single-class) distribution is exactly zero; the general
  // formula would leave rounding residue of order 1e-16, which matters for
  // the fluctuation statistics of constant images.
  if (counts.size() <= 1) return 0.0;
  std::sort(counts.begin(), counts.end());
  double total = 0.0;
  double acc = 0.0;
  for (const std::uint64_t c : counts) {
    const double cd = static_cast<double>(c);
    total += cd;
    acc += cd * std::log(cd);
  }
  return std::log(total) - acc / total;
}

// Entropy of the color distribution of a cube.
inline double shannon_entropy(const ImageCube& im) {
  return entropy_from_counts(detail::color_counts(
      im.data.data(), static_cast<std::size_t>(im.pixel_count()),
      im.channels));
}

inline double pattern_entropy(const std::array<std::uint64_t, 7>& counts) {
  return entropy_from_counts(
      std::vector<std::uint64_t>(counts.begin(), counts.end()));
}

inline double pattern_entropy(const PatternMap& pm) {
  return pattern_entropy(pm.counts);
}

// Color and pattern entropy at every (k, s) cell of a coarseness/scale grid.
// Values are laid out k-major: entry(ki, si) = [ki * s_grid.size() + si].
struct EntropySurface {
  std::vector<std::int64_t> k_grid;
  std::vector<std::int64_t> s_grid;
  std::vector<double> color;    // S_C(k, s)
  std::vector<double> pattern;  // S_H(k, s)

  double color_at(std::size_t ki, std::size_t si) const {
    return color[ki * s_grid.size() + si];
  }
  double pattern_at(std::size_t ki, std::size_t si) const {
    return pattern[ki * s_grid.size() + si];
  }
};

inline std::vector<std::int64_t> default_k_grid(const ImageCube& im,
                                                std::int64_t k_step = 1) {
  if (k_step < 1) throw std::invalid_argument("k_step must be >= 1");
  std::vector<std::int64_t> ks;
  const std::int64_t k_max = k_max_of(im);
  for (std::int64_t k = 1; k <= k_max; k += k_step) ks.push_back(k);
  return ks;
}

// Scales 1 .. min(width,height)/2 (at least scale 1). A positive s_max
// overrides the upper end, clamped to min(width,height).
inline std::vector<std::int64_t> default_s_grid(const ImageCube& im,
                                                std::int64_t s_max = 0) {
  const std::int64_t side = std::min(im.width, im.height);
  std::int64_t hi = s_max > 0 ? std::min(s_max, side) : side / 2;
  if (hi < 1) hi = 1;
  std::vector<std::int64_t> ss;
  for (std::int64_t s = 1; s <= hi; ++s) ss.push_back(s);
  return ss;
}

// The scales that tile the image exactly: s | n, 1 <= s <= s_max.
inline std::vector<std::int64_t> dividing_scales(std::int64_t n,
                                                 std::int64_t s_max) {
  std::vector<std::int64_t> ss;
  for (std::int64_t s = 1; s <= s_max && s <= n; ++s)
    if (n % s == 0) ss.push_back(s);
  return ss;
}

// Sweeps the cascade over k_grid x s_grid. Each scale's block reduction is
// computed once and shared read-only across all k; every (k, s) cell is an
// independent work item writing only its own two output slots, so results
// are bitwise identical for every thread count.
// Cells whose reduced image has no complete 2x2 block report S_H = 0.
inline EntropySurface entropy_surface(const ImageCube& im,
                                      std::vector<std::int64_t> k_grid,
                                      std::vector<std::int64_t> s_grid,
                                      unsigned threads = 0) {
  require_analysis_cube(im);
  if (k_grid.empty() || s_grid.empty())
    throw std::invalid_argument("entropy_surface: empty grid");
  for (const std::int64_t k : k_grid)
    if (k < 1) throw std::invalid_argument("entropy_surface: k must be >= 1");
  for (const std::int64_t s : s_grid)
    if (s < 1 || s > std::min(im.width, im.height))
      throw std::invalid_argument("entropy_surface: s out of range");

  std::vector<ImageCube> reduced;
  reduced.reserve(s_grid.size());
  for (const std::int64_t s : s_grid) reduced.push_back(block_reduce(im, s));

  EntropySurface surf;
  surf.k_grid = std::move(k_grid);
  surf.s_grid = std::move(s_grid);
  const std::size_t nk = surf.k_grid.size();
  const std::size_t ns = surf.s_grid.size();
  surf.color.assign(nk * ns, 0.0);
  surf.pattern.assign(nk * ns, 0.0);

  parallel_for(nk * ns, threads, [&](std::size_t cell) {
    const std::size_t ki = cell / ns;
    const std::size_t si = cell % ns;
    const ImageCube level = quantize(reduced[si], surf.k_grid[ki]);
    surf.color[cell] = shannon_entropy(level);
    surf.pattern[cell] = (level.width < 2 || level.height < 2)
                             ? 0.0
                             : pattern_entropy(detail::pattern_counts(level));
  });
  return surf;
}

// Ordinary least squares for S = a*x + b with x = ln(s / n_base), so the
// intercept b is the extrapolated entropy at full reduction (s = n_base) and
// ideal full-information data S = -2 ln(s/N) gives a = -2, b = 0.
struct FitResult {
  double a = 0.0;        // slope against ln(s/n_base)
  double b = 0.0;        // intercept at s = n_base
  double sigma_a = 0.0;  // standard error of a
  double sigma_b = 0.0;  // standard error of b
  double rms = 0.0;      // root-mean-square residual
  std::int64_t n = 0;    // points used
};

inline FitResult fit_log_scale(const std::vector<std::int64_t>& scales,
                               const std::vector<double>& values,
                               std::int64_t n_base) {
  if (scales.size() != values.size())
    throw std::invalid_argument("fit_log_scale: size mismatch");
  if (n_base < 1)
    throw std::invalid_argument("fit_log_scale: base size must be >= 1");
  const std::size_t n = scales.size();
  if (n < 3)
    throw std::invalid_argument("fit_log_scale: need at least 3 points");
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (scales[i] < 1)
      throw std::invalid_argument("fit_log_scale: scales must be >= 1");
    xs[i] = std::log(static_cast<double>(scales[i]) /
                     static_cast<double>(n_base));
  }
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += values[i];
  }
  const double nd = static_cast<double>(n);
  const double mx = sx / nd;
  const double my = sy / nd;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    sxx += dx * dx;
    sxy += dx * (values[i] - my);
  }
  if (sxx <= 0.0)
    throw std::invalid_argument("fit_log_scale: scales are all equal");
  FitResult fit;
  fit.n = static_cast<std::int64_t>(n);
  fit.a = sxy / sxx;
  fit.b = my - fit.a * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = values[i] - (fit.a * xs[i] + fit.b);
    ssr += r * r;
  }
  const double var = ssr / (nd - 2.0);
  fit.sigma_a = std::sqrt(var / sxx);
  fit.sigma_b = std::sqrt(var * (1.0 / nd + mx * mx / sxx));
  fit.rms = std::sqrt(ssr / nd);
  return fit;
}

// Peak of the pattern-entropy column at one scale: the largest S_H over the
// surface's k grid, ties resolved to the smallest k.
struct PatternPeak {
  std::int64_t k_star = 0;
  double s_star = 0.0;
};

inline PatternPeak max_pattern_entropy_over_k(const EntropySurface& surf,
                                              std::int64_t s) {
  const auto it = std::find(surf.s_grid.begin(), surf.s_grid.end(), s);
  if (it == surf.s_grid.end())
    throw std::invalid_argument("scale not present in surface");
  const std::size_t si =
      static_cast<std::size_t>(it - surf.s_grid.begin());
  PatternPeak peak;
  peak.k_star = surf.k_grid[0];
  peak.s_star = surf.pattern_at(0, si);
  for (std::size_t ki = 1; ki < surf.k_grid.size(); ++ki) {
    const double v = surf.pattern_at(ki, si);
    if (v > peak.s_star) {
      peak.s_star = v;
      peak.k_star = surf.k_grid[ki];
    }
  }
  return peak;
}

}  // namespace scalelaws
