#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "scalelaws/image_cube.hpp"

namespace scalelaws {

// The seven ways four beads on an unoriented cycle can repeat, written as
// rotation-minimal relabeled strings: position i holds the index of the
// first occurrence of its value. Every 2x2 pixel block, read around its
// perimeter, falls in exactly one class.
inline constexpr int kNumPatternClasses = 7;
inline const std::array<std::string, 7> kPatternClassNames = {
    "0000", "0001", "0011", "0012", "0101", "0102", "0123"};

// Number of set partitions of four cycle positions that collapse onto each
// class (15 partitions in total).
inline constexpr std::array<int, 7> kPatternMultiplicities = {1, 4, 2, 4,
                                                              1, 2, 1};

// Interaction energy of each class: sum over the six unordered pixel pairs
// of the 2x2 square of (equal ? 1/d : 0), with d = 1 for the four side pairs
// and d = sqrt 2 for the two diagonals. (An alternative convention weighting
// by d instead of 1/d appears in parts of the literature and would give the
// all-equal class 4 + 2*sqrt 2; the 1/d pair-sum is used here. Nothing
// downstream depends on the choice — classification is by canonical string.)
inline const std::array<double, 7> kPatternEnergies = {
    4.0 + std::sqrt(2.0), 2.0 + 1.0 / std::sqrt(2.0), 2.0, 1.0,
    std::sqrt(2.0),       1.0 / std::sqrt(2.0),       0.0};

inline double hamiltonian_value(int cls) {
  if (cls < 0 || cls >= kNumPatternClasses)
    throw std::invalid_argument("hamiltonian_value: class index out of range");
  return kPatternEnergies[static_cast<std::size_t>(cls)];
}

namespace detail {

// Rotation-minimal first-occurrence relabeling of four labels.
inline std::string canonical_cycle_string(const std::array<int, 4>& lab) {
  std::string best = "9999";
  for (int r = 0; r < 4; ++r) {
    char out[4];
    int next = 0;
    int seen_label[4];
    int seen_code[4];
    for (int i = 0; i < 4; ++i) {
      const int v = lab[(r + i) & 3];
      int code = -1;
      for (int j = 0; j < next; ++j)
        if (seen_label[j] == v) {
          code = seen_code[j];
          break;
        }
      if (code < 0) {
        code = next;
        seen_label[next] = v;
        seen_code[next] = next;
        ++next;
      }
      out[i] = static_cast<char>('0' + code);
    }
    std::string s(out, 4);
    if (s < best) best = s;
  }
  return best;
}

inline int class_index_of(const std::string& canonical) {
  for (int i = 0; i < kNumPatternClasses; ++i)
    if (kPatternClassNames[static_cast<std::size_t>(i)] == canonical)
      return i;
  throw std::logic_error("unreachable: non-canonical cycle string");
}

// Classification by equality signature. Bit layout: bit0 e01, bit1 e12,
// bit2 e23, bit3 e30 (sides), bit4 e02, bit5 e13 (diagonals). Signatures
// that no equivalence relation can produce map to 255; exact equality of
// samples is transitive, so they cannot arise from real pixels.
inline const std::array<std::uint8_t, 64> kSignatureClass = [] {
  std::array<std::uint8_t, 64> lut{};
  constexpr int pair_a[6] = {0, 1, 2, 3, 0, 1};
  constexpr int pair_b[6] = {1, 2, 3, 0, 2, 3};
  for (int sig = 0; sig < 64; ++sig) {
    // Union the positions joined by the signature's equalities.
    std::array<int, 4> lab = {0, 1, 2, 3};
    for (int bit = 0; bit < 6; ++bit) {
      if (!(sig & (1 << bit))) continue;
      const int a = lab[static_cast<std::size_t>(pair_a[bit])];
      const int b = lab[static_cast<std::size_t>(pair_b[bit])];
      if (a != b)
        for (auto& l : lab)
          if (l == b) l = a;
    }
    // A signature is consistent only if it lists *every* equality its own
    // closure implies.
    int implied = 0;
    for (int bit = 0; bit < 6; ++bit)
      if (lab[static_cast<std::size_t>(pair_a[bit])] ==
          lab[static_cast<std::size_t>(pair_b[bit])])
        implied |= 1 << bit;
    lut[static_cast<std::size_t>(sig)] =
        implied == sig
            ? static_cast<std::uint8_t>(
                  class_index_of(canonical_cycle_string(lab)))
            : std::uint8_t{255};
  }
  return lut;
}();

}  // namespace detail

// Classifies four pixel colors read around a closed cycle (adjacent indices
// are neighbors, 3 wraps to 0). All four keys must have the same channel
// count. Returns the class index 0..6 into kPatternClassNames.
inline int classify_quad(const ColorKey& a, const ColorKey& b,
                         const ColorKey& c, const ColorKey& d) {
  const std::array<const ColorKey*, 4> q = {&a, &b, &c, &d};
  for (int i = 1; i < 4; ++i)
    if (q[static_cast<std::size_t>(i)]->size() != a.size())
      throw std::invalid_argument("classify_quad: channel count mismatch");
  std::array<int, 4> lab{};
  for (int i = 0; i < 4; ++i) {
    lab[static_cast<std::size_t>(i)] = i;
    for (int j = 0; j < i; ++j)
      if (*q[static_cast<std::size_t>(i)] == *q[static_cast<std::size_t>(j)]) {
        lab[static_cast<std::size_t>(i)] = j;
        break;
      }
  }
  return detail::class_index_of(detail::canonical_cycle_string(lab));
}

// Class map of every 2x2 block of the image. The block anchored at (x, y)
// is read around its perimeter (x,y) -> (x+1,y) -> (x+1,y+1) -> (x,y+1); no
// wrap-around, so the map is (width-1) x (height-1).
struct PatternMap {
  std::int64_t width = 0;   // anchors per row  (image width  - 1)
  std::int64_t height = 0;  // anchors per column (image height - 1)
  std::vector<std::uint8_t> classes;  // row-major class indices
  std::array<std::uint64_t, 7> counts{};

  std::uint8_t at(std::int64_t x, std::int64_t y) const {
    return classes[static_cast<std::size_t>(y * width + x)];
  }
};

namespace detail {

// Equality signature of the 2x2 block anchored at (x, y).
inline int block_signature(const ImageCube& im, std::int64_t x,
                           std::int64_t y) {
  const std::int64_t C = im.channels;
  const double* p0 = im.pixel(x, y);
  const double* p1 = im.pixel(x + 1, y);
  const double* p2 = im.pixel(x + 1, y + 1);
  const double* p3 = im.pixel(x, y + 1);
  int sig = 0;
  if (pixel_equal(p0, p1, C)) sig |= 1 << 0;
  if (pixel_equal(p1, p2, C)) sig |= 1 << 1;
  if (pixel_equal(p2, p3, C)) sig |= 1 << 2;
  if (pixel_equal(p3, p0, C)) sig |= 1 << 3;
  if (pixel_equal(p0, p2, C)) sig |= 1 << 4;
  if (pixel_equal(p1, p3, C)) sig |= 1 << 5;
  return sig;
}

// Class counts only — the hot path used by entropy sweeps, which never
// materializes the map.
inline std::array<std::uint64_t, 7> pattern_counts(const ImageCube& im) {
  require_analysis_cube(im);
  std::array<std::uint64_t, 7> counts{};
  for (std::int64_t y = 0; y + 1 < im.height; ++y)
    for (std::int64_t x = 0; x + 1 < im.width; ++x) {
      const std::uint8_t cls =
          kSignatureClass[static_cast<std::size_t>(block_signature(im, x, y))];
      if (cls == 255)
        throw std::logic_error("pattern_counts: inconsistent signature");
      ++counts[cls];
    }
  return counts;
}

}  // namespace detail

inline PatternMap pattern_map(const ImageCube& im) {
  require_analysis_cube(im);
  PatternMap pm;
  pm.width = im.width - 1;
  pm.height = im.height - 1;
  pm.classes.resize(
      static_cast<std::size_t>(pm.width) * static_cast<std::size_t>(pm.height));
  for (std::int64_t y = 0; y < pm.height; ++y)
    for (std::int64_t x = 0; x < pm.width; ++x) {
      const std::uint8_t cls =
          detail::kSignatureClass[static_cast<std::size_t>(
              detail::block_signature(im, x, y))];
      if (cls == 255)
        throw std::logic_error("pattern_map: inconsistent signature");
      pm.classes[static_cast<std::size_t>(y * pm.width + x)] = cls;
      ++pm.counts[cls];
    }
  return pm;
}

// Binary PGM (P5); class index i is scaled to gray round(i*255/6) so the
// seven classes span the full 8-bit range.
inline void write_pattern_pgm(const PatternMap& pm, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "P5\n" << pm.width << " " << pm.height << "\n255\n";
  std::vector<std::uint8_t> gray(pm.classes.size());
  for (std::size_t i = 0; i < pm.classes.size(); ++i)
    gray[i] = static_cast<std::uint8_t>((pm.classes[i] * 255 + 3) / 6);
  out.write(reinterpret_cast<const char*>(gray.data()),
            static_cast<std::streamsize>(gray.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

// CSV of the class tally: header line, then one class,count row per class.
inline void write_pattern_csv(const PatternMap& pm, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "class,count\n";
  for (int i = 0; i < kNumPatternClasses; ++i)
    out << kPatternClassNames[static_cast<std::size_t>(i)] << ','
        << pm.counts[static_cast<std::size_t>(i)] << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace scalelaws
