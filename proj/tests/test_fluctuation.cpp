#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "scalelaws/fluctuation.hpp"
#include "scalelaws/synth.hpp"

using namespace scalelaws;

TEST_CASE("constant images have unit fluctuation statistics, exactly") {
  const ImageCube im = make_cube(8, 8, 2, 1.0);
  for (const std::int64_t k : {1, 2, 5}) {
    const OmegaPair oc = omega_image(im, k);
    REQUIRE(oc.plus == 1.0);
    REQUIRE(oc.minus == 1.0);
    REQUIRE(oc.alt_plus == 1.0);
    REQUIRE(oc.alt_minus == 1.0);
    const OmegaPair op = omega_patterns(im, k);
    REQUIRE(op.plus == 1.0);
    REQUIRE(op.minus == 1.0);
    // The trajectory-count normalization divides the same N/2 unit terms by
    // N/2 - 1, so on a constant image it sits exactly at (N/2)/(N/2 - 1).
    REQUIRE(op.alt_plus == 4.0 / 3.0);
    REQUIRE(op.alt_minus == 4.0 / 3.0);
  }
}

TEST_CASE("series lengths and term counts match the cascade depth") {
  const ImageCube im = gen_random(8, 3);

  const std::vector<double> color = color_entropy_series(im, 1);
  REQUIRE(color.size() == 8);       // s = 1..N
  REQUIRE(color.back() == 0.0);     // single pixel at s = N

  const std::vector<double> pattern = pattern_entropy_series(im, 1);
  REQUIRE(pattern.size() == 5);     // s = 1..N/2+1
  REQUIRE(pattern.back() == 0.0);   // below 2x2 at s = N/2+1

  const OmegaPair oc = omega_image(im, 1);
  REQUIRE(oc.n_terms == 7);  // N-1 increments
  const OmegaPair op = omega_patterns(im, 1);
  REQUIRE(op.n_terms == 4);  // N/2 increments
}

TEST_CASE("omega recomputes from the published increments") {
  const ImageCube im = gen_random(8, 11);
  for (const DeltaMode mode : {DeltaMode::color, DeltaMode::pattern}) {
    const auto deltas = delta_entropy_series(im, 2, mode);
    double sum_plus = 0.0;
    double sum_minus = 0.0;
    for (const auto& [s, d] : deltas) {
      sum_plus += std::exp(d);
      sum_minus += std::exp(-d);
    }
    const double n = static_cast<double>(deltas.size());
    const OmegaPair om = mode == DeltaMode::color ? omega_image(im, 2)
                                                  : omega_patterns(im, 2);
    REQUIRE(om.plus == sum_plus / n);
    REQUIRE(om.minus == sum_minus / n);
    REQUIRE(om.n_terms == static_cast<std::int64_t>(deltas.size()));
  }
}

TEST_CASE("delta series indexes transitions by their starting scale") {
  const ImageCube im = gen_random(8, 4);
  const auto deltas = delta_entropy_series(im, 1, DeltaMode::color);
  const std::vector<double> series = color_entropy_series(im, 1);
  REQUIRE(deltas.size() == series.size() - 1);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    REQUIRE(deltas[i].first == static_cast<std::int64_t>(i) + 1);
    REQUIRE(deltas[i].second == series[i + 1] - series[i]);
  }
}

TEST_CASE("the two normalization conventions differ by a fixed ratio") {
  // count convention divides by N/2 pattern increments; the trajectory-count
  // convention divides by N/2 - 1.
  const ImageCube im = gen_random(8, 9);
  const OmegaPair om = omega_patterns(im, 1);
  const double count_n = static_cast<double>(im.width / 2);
  const double alt_n = static_cast<double>(im.width / 2 - 1);
  REQUIRE(om.alt_plus == Catch::Approx(om.plus * count_n / alt_n));
  REQUIRE(om.alt_minus == Catch::Approx(om.minus * count_n / alt_n));
}

TEST_CASE("convexity bound: the exponential mean dominates") {
  // By Jensen's inequality the exponential average of the increments is at
  // least exp of their plain average.
  const ImageCube im = gen_random(16, 21);
  for (const std::int64_t k : {1, 3, 8}) {
    const auto deltas = delta_entropy_series(im, k, DeltaMode::color);
    double mean = 0.0;
    for (const auto& [s, d] : deltas) mean += d;
    mean /= static_cast<double>(deltas.size());
    const OmegaPair om = omega_image(im, k);
    REQUIRE(om.plus >= std::exp(mean) - 1e-12);
    REQUIRE(om.minus >= std::exp(-mean) - 1e-12);
  }
}

TEST_CASE("omega_patterns_sweep matches per-k calls for any thread count") {
  const ImageCube im = gen_random(12, 6);
  const std::vector<std::int64_t> k_grid = {1, 2, 3, 5, 8, 12};
  const std::vector<OmegaPair> swept = omega_patterns_sweep(im, k_grid, 3);
  REQUIRE(swept.size() == k_grid.size());
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    const OmegaPair solo = omega_patterns(im, k_grid[i]);
    REQUIRE(swept[i].k == k_grid[i]);
    REQUIRE(swept[i].plus == solo.plus);
    REQUIRE(swept[i].minus == solo.minus);
    REQUIRE(swept[i].alt_plus == solo.alt_plus);
    REQUIRE(swept[i].alt_minus == solo.alt_minus);
  }
  REQUIRE_THROWS_AS(omega_patterns_sweep(im, {1, 0}), std::invalid_argument);
}

TEST_CASE("shape preconditions") {
  SECTION("non-square input is rejected") {
    const ImageCube rect = make_cube(8, 6, 1, 1.0);
    REQUIRE_THROWS_AS(omega_image(rect, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(omega_patterns(rect, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(delta_entropy_series(rect, 1, DeltaMode::color),
                      std::invalid_argument);
  }
  SECTION("the color cascade needs side >= 3") {
    REQUIRE_THROWS_AS(omega_image(make_cube(2, 2, 1, 1.0), 1),
                      std::invalid_argument);
    REQUIRE_NOTHROW(omega_image(make_cube(3, 3, 1, 1.0), 1));
  }
  SECTION("the pattern cascade needs side >= 6") {
    REQUIRE_THROWS_AS(omega_patterns(make_cube(5, 5, 1, 1.0), 1),
                      std::invalid_argument);
    REQUIRE_NOTHROW(omega_patterns(make_cube(6, 6, 1, 1.0), 1));
  }
}
