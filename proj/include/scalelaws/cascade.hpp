#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "scalelaws/image_cube.hpp"

namespace scalelaws {

// floor(v / k) for v >= 0 finite and integer k >= 1, with the quotient
// corrected against exact integer-valued double products so that binary
// division rounding can never shift the result across a bin boundary.
// In particular floor(floor(v)/k) == exact_floor_div(v, k) holds bitwise
// whenever floor(v) is exact, which makes two-stage binning equal one-stage
// binning (quantize(quantize(im, 1), k) == quantize(im, k)).
inline double exact_floor_div(double v, std::int64_t k) {
  const double kd = static_cast<double>(k);
  double q = std::floor(v / kd);
  while (q * kd > v) q -= 1.0;
  while ((q + 1.0) * kd <= v) q += 1.0;
  return q;
}

// Bin width count: bins 0..k-1 cover [0, k); the largest sample of `im`
// falls in the top bin of exactly floor(max)+1 unit-width bins.
inline std::int64_t k_max_of(const ImageCube& im) {
  return static_cast<std::int64_t>(std::floor(im.max_sample())) + 1;
}

// Channel-wise mean over non-overlapping s x s pixel blocks. Trailing rows
// and columns that do not fill a complete block are cropped. The result has
// floor(width/s) x floor(height/s) pixels and keeps channels and dynamics
// (a mean of values < dynamics stays < dynamics).
inline ImageCube block_reduce(const ImageCube& im, std::int64_t s) {
  if (s < 1) throw std::invalid_argument("block_reduce: s must be >= 1");
  const std::int64_t w = im.width / s;
  const std::int64_t h = im.height / s;
  if (w < 1 || h < 1)
    throw std::invalid_argument("block_reduce: s exceeds image size");
  if (s == 1) return im;
  ImageCube out = make_cube(w, h, im.channels, im.dynamics);
  const double inv = 1.0 / (static_cast<double>(s) * static_cast<double>(s));
  for (std::int64_t by = 0; by < h; ++by) {
    for (std::int64_t bx = 0; bx < w; ++bx) {
      for (std::int64_t c = 0; c < im.channels; ++c) {
        double sum = 0.0;
        for (std::int64_t dy = 0; dy < s; ++dy)
          for (std::int64_t dx = 0; dx < s; ++dx)
            sum += im.at(bx * s + dx, by * s + dy, c);
        out.at(bx, by, c) = sum * inv;
      }
    }
  }
  return out;
}

// Floors every sample into unit bins of width k. Quantization applies for
// every k including k = 1: quantize(im, 1) floors fractional samples (block
// means) to integers. Dynamics is recomputed from the now-integral samples
// (max + 1); quantizing by k_max yields the all-zero cube with dynamics 1.
inline ImageCube quantize(const ImageCube& im, std::int64_t k) {
  if (k < 1) throw std::invalid_argument("quantize: k must be >= 1");
  ImageCube out = im;
  double m = 0.0;
  for (double& v : out.data) {
    v = exact_floor_div(v, k);
    if (v > m) m = v;
  }
  out.dynamics = m + 1.0;
  return out;
}

// One cell of the scale/coarseness cascade: reduce by s, then bin by k.
inline ImageCube cascade_level(const ImageCube& im, std::int64_t k,
                               std::int64_t s) {
  require_analysis_cube(im);
  return quantize(block_reduce(im, s), k);
}

}  // namespace scalelaws
