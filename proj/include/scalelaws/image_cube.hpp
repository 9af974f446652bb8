#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "scalelaws/detail/color_table.hpp"

namespace scalelaws {

// A multi-channel image: `channels` real samples per pixel, stored row-major
// with channels interleaved (index = (y*width + x)*channels + c).
//
// Structural invariants (checked by `check`): width, height, channels >= 1;
// every sample finite and >= 0; `dynamics` strictly greater than every
// sample. Public analysis entry points additionally require width and
// height >= 2 (see `require_analysis_cube`); smaller cubes only occur as
// intermediate reductions.
struct ImageCube {
  std::int64_t width = 0;
  std::int64_t height = 0;
  std::int64_t channels = 0;
  double dynamics = 0.0;  // exclusive upper bound on sample values
  std::vector<double> data;

  double& at(std::int64_t x, std::int64_t y, std::int64_t c) {
    return data[static_cast<std::size_t>((y * width + x) * channels + c)];
  }
  double at(std::int64_t x, std::int64_t y, std::int64_t c) const {
    return data[static_cast<std::size_t>((y * width + x) * channels + c)];
  }
  const double* pixel(std::int64_t x, std::int64_t y) const {
    return data.data() + static_cast<std::size_t>((y * width + x) * channels);
  }
  std::int64_t pixel_count() const { return width * height; }

  double max_sample() const {
    double m = 0.0;
    for (double v : data)
      if (v > m) m = v;
    return m;
  }

  // Throws std::invalid_argument if any structural invariant is violated.
  void check() const {
    if (width < 1 || height < 1 || channels < 1)
      throw std::invalid_argument("image cube: dimensions must be >= 1");
    if (data.size() !=
        static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
            static_cast<std::size_t>(channels))
      throw std::invalid_argument("image cube: data size mismatch");
    double m = 0.0;
    for (double v : data) {
      if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument(
            "image cube: samples must be finite and non-negative");
      if (v > m) m = v;
    }
    if (!(dynamics > m))
      throw std::invalid_argument(
          "image cube: dynamics must exceed the largest sample");
  }
};

// Allocates a zero-filled cube. `dynamics` defaults to 1 (valid for the
// all-zero content) and should be set by the caller after filling.
inline ImageCube make_cube(std::int64_t width, std::int64_t height,
                           std::int64_t channels, double dynamics = 1.0) {
  if (width < 1 || height < 1 || channels < 1)
    throw std::invalid_argument("make_cube: dimensions must be >= 1");
  ImageCube im;
  im.width = width;
  im.height = height;
  im.channels = channels;
  im.dynamics = dynamics;
  im.data.assign(static_cast<std::size_t>(width) *
                     static_cast<std::size_t>(height) *
                     static_cast<std::size_t>(channels),
                 0.0);
  return im;
}

// Guards ops whose semantics need at least a 2x2 pixel grid.
inline void require_analysis_cube(const ImageCube& im) {
  if (im.width < 2 || im.height < 2)
    throw std::invalid_argument("operation requires width and height >= 2");
}

// The color of one pixel: the exact tuple of its channel samples.
// Two pixels share a color only when every channel matches exactly.
using ColorKey = std::vector<double>;

inline ColorKey color_at(const ImageCube& im, std::int64_t x,
                         std::int64_t y) {
  const double* p = im.pixel(x, y);
  return ColorKey(p, p + im.channels);
}

struct ColorCensus {
  std::int64_t total_pixels = 0;
  std::int64_t distinct_colors = 0;
  double fraction = 0.0;  // distinct_colors / total_pixels, in (0, 1]
};

// Counts the distinct colors of the cube.
inline ColorCensus color_census(const ImageCube& im) {
  require_analysis_cube(im);
  ColorCensus census;
  census.total_pixels = im.pixel_count();
  census.distinct_colors = static_cast<std::int64_t>(
      detail::color_counts(im.data.data(),
                           static_cast<std::size_t>(im.pixel_count()),
                           im.channels)
          .size());
  census.fraction = static_cast<double>(census.distinct_colors) /
                    static_cast<double>(census.total_pixels);
  return census;
}

// A cube is "fully chromatically informative" when (almost) every pixel
// carries a unique color: distinct/total >= theta.
inline bool is_fci(const ImageCube& im, double theta = 0.999) {
  return color_census(im).fraction >= theta;
}

// Rectangular crop; offsets are zero-based. The result must itself be a
// valid analysis cube (cw, ch >= 2).
inline ImageCube crop(const ImageCube& im, std::int64_t x, std::int64_t y,
                      std::int64_t cw, std::int64_t ch) {
  if (x < 0 || y < 0 || cw < 2 || ch < 2 || x + cw > im.width ||
      y + ch > im.height)
    throw std::invalid_argument("crop: window out of bounds or below 2x2");
  ImageCube out = make_cube(cw, ch, im.channels, im.dynamics);
  for (std::int64_t yy = 0; yy < ch; ++yy)
    for (std::int64_t xx = 0; xx < cw; ++xx)
      for (std::int64_t c = 0; c < im.channels; ++c)
        out.at(xx, yy, c) = im.at(x + xx, y + yy, c);
  return out;
}

}  // namespace scalelaws
