// Opt-in acceptance for user-supplied natural-image corpora. Synthetic
// desk-scale images cannot reproduce the published natural-scene values, so
// this binary runs only when SCALELAWS_NATURAL_DIR points at a directory of
// images (PNM or RAW+sidecar). Files must be fully chromatically
// informative — color census fraction >= 0.999 or at least 5 channels — to
// be gated in; gated files are checked at the tight publication tolerances.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "scalelaws/image_cube.hpp"
#include "scalelaws/image_io.hpp"
#include "scalelaws/laws.hpp"

using namespace scalelaws;

int main() {
  const char* dir = std::getenv("SCALELAWS_NATURAL_DIR");
  if (dir == nullptr || *dir == '\0') {
    std::cout << "SKIP: SCALELAWS_NATURAL_DIR is not set; no natural corpus "
                 "to check\n";
    return 0;
  }

  std::vector<std::string> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm" || ext == ".bin" ||
        ext == ".raw")
      paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) {
    std::cout << "SKIP: no image files (.pgm/.ppm/.pnm/.bin/.raw) in " << dir
              << "\n";
    return 0;
  }

  int failures = 0;
  int gated_in = 0;
  const LawConfig config;  // publication tolerances

  for (const std::string& path : paths) {
    ImageCube im;
    try {
      im = load_image(path);
      if (im.width != im.height) {
        const std::int64_t side = std::min(im.width, im.height);
        im = crop(im, 0, 0, side, side);
      }
    } catch (const std::exception& e) {
      std::cout << path << ": SKIP (" << e.what() << ")\n";
      continue;
    }

    const ColorCensus census = color_census(im);
    const bool informative =
        census.fraction >= config.theta_fci || im.channels >= 5;
    if (!informative) {
      std::cout << path << ": SKIP (census fraction "
                << census.fraction << " < " << config.theta_fci
                << " and channels " << im.channels << " < 5)\n";
      continue;
    }
    ++gated_in;

    try {
      const LawReport rep = verify_laws(im, config);
      const bool all = rep.l1_pass && rep.l2_pass && rep.l3_pass;
      std::cout << path << ": " << (all ? "PASS" : "FAIL")
                << " (L1 slope=" << rep.l1_fit.a
                << " pass=" << rep.l1_pass << ", L2 mean=" << rep.l2_mean
                << " pass=" << rep.l2_pass << ", L3 max dev="
                << rep.l3_max_dev << " pass=" << rep.l3_pass << ")\n";
      if (!all) ++failures;
    } catch (const std::exception& e) {
      std::cout << path << ": FAIL (" << e.what() << ")\n";
      ++failures;
    }
  }

  if (gated_in == 0) {
    std::cout << "SKIP: no file passed the full-color-information gate\n";
    return 0;
  }
  std::cout << gated_in << " file(s) checked, " << failures << " failed\n";
  return failures == 0 ? 0 : 1;
}
