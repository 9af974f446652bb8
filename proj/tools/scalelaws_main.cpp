// scalelaws: generate synthetic test images, sweep multiscale entropy
// statistics, and check the three candidate scaling laws on any image.
//
// Exit codes: 0 success; 1 I/O failure; 2 usage error; 3 input shape
// unsuitable (e.g. non-square input for fluctuation statistics); 4 a law
// named in --expect failed under --strict.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scalelaws/cascade.hpp"
#include "scalelaws/entropy.hpp"
#include "scalelaws/fluctuation.hpp"
#include "scalelaws/image_cube.hpp"
#include "scalelaws/image_io.hpp"
#include "scalelaws/laws.hpp"
#include "scalelaws/necklace.hpp"
#include "scalelaws/synth.hpp"
#include "scalelaws/version.hpp"

namespace {

using namespace scalelaws;

// Shortest round-trip decimal form; locale-free, '.' decimal point.
std::string fmt(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string stem_of(const std::string& path) {
  const std::size_t slash = path.find_last_of("/\\");
  const std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path;
  return path.substr(0, dot);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

struct CropSpec {
  std::vector<std::int64_t> window;  // empty or {x, y, w, h}
  bool to_square = false;
};

// Applies --crop, then --crop-square (top-left square of side min(W,H)).
ImageCube apply_crop(ImageCube im, const CropSpec& spec) {
  if (!spec.window.empty())
    im = crop(im, spec.window[0], spec.window[1], spec.window[2],
              spec.window[3]);
  if (spec.to_square && im.width != im.height) {
    const std::int64_t side = std::min(im.width, im.height);
    im = crop(im, 0, 0, side, side);
  }
  return im;
}

std::string surface_csv(const EntropySurface& surf) {
  std::string text = "k,s,S_C,S_H\n";
  for (std::size_t ki = 0; ki < surf.k_grid.size(); ++ki)
    for (std::size_t si = 0; si < surf.s_grid.size(); ++si) {
      text += std::to_string(surf.k_grid[ki]);
      text += ',';
      text += std::to_string(surf.s_grid[si]);
      text += ',';
      text += fmt(surf.color_at(ki, si));
      text += ',';
      text += fmt(surf.pattern_at(ki, si));
      text += '\n';
    }
  return text;
}

std::string omega_csv(const std::vector<OmegaPair>& omegas) {
  std::string text =
      "k,omega_plus,omega_minus,omega_alt_plus,omega_alt_minus,n_terms\n";
  for (const OmegaPair& om : omegas) {
    text += std::to_string(om.k);
    text += ',';
    text += fmt(om.plus);
    text += ',';
    text += fmt(om.minus);
    text += ',';
    text += fmt(om.alt_plus);
    text += ',';
    text += fmt(om.alt_minus);
    text += ',';
    text += std::to_string(om.n_terms);
    text += '\n';
  }
  return text;
}

std::string delta_csv(
    const std::vector<std::pair<std::int64_t, double>>& color,
    const std::vector<std::pair<std::int64_t, double>>& pattern,
    std::int64_t k) {
  std::string text = "mode,k,s,delta\n";
  for (const auto& [s, d] : color) {
    text += "color,";
    text += std::to_string(k);
    text += ',';
    text += std::to_string(s);
    text += ',';
    text += fmt(d);
    text += '\n';
  }
  for (const auto& [s, d] : pattern) {
    text += "pattern,";
    text += std::to_string(k);
    text += ',';
    text += std::to_string(s);
    text += ',';
    text += fmt(d);
    text += '\n';
  }
  return text;
}

std::string abundance_csv(const std::array<double, 7>& pct) {
  std::string text = "class,percent\n";
  for (int i = 0; i < kNumPatternClasses; ++i) {
    text += kPatternClassNames[static_cast<std::size_t>(i)];
    text += ',';
    text += fmt(pct[static_cast<std::size_t>(i)]);
    text += '\n';
  }
  return text;
}

// ----------------------------------------------------------------- generate
struct GenerateArgs {
  std::string family;
  std::int64_t n = 256;
  int m = 8;
  std::uint64_t seed = 1;
  bool randomized = false;
  bool per_level = false;
  std::int64_t rows = 256;
  std::int64_t cols = 256;
  std::string output;
};

int run_generate(const GenerateArgs& a) {
  ImageCube im;
  std::string provenance;
  if (a.family == "plane") {
    im = gen_plane(a.n);
    provenance = "gen_plane(n=" + std::to_string(a.n) + ")";
  } else if (a.family == "random") {
    im = gen_random(a.n, a.seed);
    provenance = "gen_random(n=" + std::to_string(a.n) +
                 ", seed=" + std::to_string(a.seed) + ", rng=splitmix64)";
  } else if (a.family == "hilbert") {
    im = gen_hilbert(a.m, a.seed, a.randomized, a.per_level);
    provenance = "gen_hilbert(m=" + std::to_string(a.m) +
                 ", seed=" + std::to_string(a.seed) +
                 ", randomized=" + (a.randomized ? "true" : "false") +
                 ", per_level=" + (a.per_level ? "true" : "false") +
                 ", rng=splitmix64)";
  } else if (a.family == "pavement") {
    im = gen_pavement(a.rows, a.cols);
    provenance = "gen_pavement(rows=" + std::to_string(a.rows) +
                 ", cols=" + std::to_string(a.cols) + ")";
  } else {
    std::cerr << "unknown generator family: " << a.family
              << " (plane|random|hilbert|pavement)\n";
    return 2;
  }
  save_image(im, a.output, minimal_dtype(im), provenance);
  const ColorCensus census = color_census(im);
  std::cout << "generated " << a.family << " " << im.width << "x" << im.height
            << "x" << im.channels << " dynamics=" << fmt(im.dynamics)
            << " -> " << a.output << "\n"
            << "census: total=" << census.total_pixels
            << " distinct=" << census.distinct_colors
            << " fraction=" << fmt(census.fraction)
            << " fci=" << (is_fci(im) ? "true" : "false") << "\n";
  return 0;
}

// ------------------------------------------------------------------ analyze
struct AnalyzeArgs {
  std::string input;
  std::string output;  // prefix; default: input stem
  std::int64_t k_step = 1;
  std::int64_t s_max = 0;
  std::int64_t delta_k = 1;
  CropSpec crop;
  std::string format = "csv";
  std::vector<std::int64_t> pattern_map_at;  // empty or {k, s}
  unsigned threads = 0;
};

int run_analyze(const AnalyzeArgs& a) {
  ImageCube im = apply_crop(load_image(a.input), a.crop);
  if (im.width != im.height) {
    std::cerr << "input is " << im.width << "x" << im.height
              << ": fluctuation statistics need a square image; pass "
                 "--crop-square (or --crop x y w h)\n";
    return 3;
  }
  const std::string prefix = a.output.empty() ? stem_of(a.input) : a.output;

  const std::vector<std::int64_t> k_grid = default_k_grid(im, a.k_step);
  const std::vector<std::int64_t> s_grid = default_s_grid(im, a.s_max);
  const EntropySurface surf = entropy_surface(im, k_grid, s_grid, a.threads);
  const auto d_color = delta_entropy_series(im, a.delta_k, DeltaMode::color);
  const auto d_pattern =
      delta_entropy_series(im, a.delta_k, DeltaMode::pattern);
  const std::vector<OmegaPair> omegas =
      omega_patterns_sweep(im, k_grid, a.threads);

  nlohmann::json prov;
  prov["schema"] = "scalelaws-analysis/1";
  prov["tool_version"] = kVersion;
  prov["input"] = a.input;
  const std::string sidecar_prov = load_provenance(a.input);
  if (!sidecar_prov.empty()) prov["input_provenance"] = sidecar_prov;
  prov["config"] = {{"k_step", a.k_step},
                    {"s_max", a.s_max},
                    {"delta_k", a.delta_k},
                    {"crop", a.crop.window},
                    {"crop_square", a.crop.to_square},
                    {"format", a.format}};
  prov["k_grid_size"] = static_cast<std::int64_t>(k_grid.size());
  prov["s_grid_size"] = static_cast<std::int64_t>(s_grid.size());

  const bool want_csv = a.format == "csv" || a.format == "both";
  const bool want_json = a.format == "json" || a.format == "both";
  if (want_csv) {
    write_text_file(prefix + "_surface.csv", surface_csv(surf));
    write_text_file(prefix + "_delta.csv",
                    delta_csv(d_color, d_pattern, a.delta_k));
    write_text_file(prefix + "_omega.csv", omega_csv(omegas));
    write_text_file(prefix + "_provenance.json", prov.dump(2) + "\n");
  }
  if (want_json) {
    nlohmann::json j;
    j["provenance"] = prov;
    j["surface"] = {{"k_grid", surf.k_grid},
                    {"s_grid", surf.s_grid},
                    {"S_C", surf.color},
                    {"S_H", surf.pattern}};
    nlohmann::json dc = nlohmann::json::array();
    for (const auto& [s, d] : d_color) dc.push_back({{"s", s}, {"delta", d}});
    nlohmann::json dp = nlohmann::json::array();
    for (const auto& [s, d] : d_pattern)
      dp.push_back({{"s", s}, {"delta", d}});
    j["delta"] = {{"k", a.delta_k}, {"color", dc}, {"pattern", dp}};
    nlohmann::json om = nlohmann::json::array();
    for (const OmegaPair& o : omegas) om.push_back(omega_to_json(o));
    j["omega_per_k"] = om;
    write_text_file(prefix + "_analysis.json", j.dump(2) + "\n");
  }
  if (!a.pattern_map_at.empty()) {
    const std::int64_t k = a.pattern_map_at[0];
    const std::int64_t s = a.pattern_map_at[1];
    const PatternMap pm = pattern_map(cascade_level(im, k, s));
    const std::string tag =
        prefix + "_patterns_k" + std::to_string(k) + "_s" + std::to_string(s);
    write_pattern_pgm(pm, tag + ".pgm");
    write_pattern_csv(pm, tag + ".csv");
  }
  std::cout << "analyzed " << a.input << ": " << k_grid.size() << " k x "
            << s_grid.size() << " s cells -> " << prefix << "_*\n";
  return 0;
}

// ------------------------------------------------------------------- verify
struct VerifyArgs {
  std::string input;
  std::string output;  // report path; empty: stdout only
  bool strict = false;
  bool tol_synthetic = false;
  std::vector<std::string> expect;  // subset of {L1, L2, L3}
  std::int64_t k_step = 1;
  std::int64_t s_max = 0;
  std::vector<std::int64_t> probe_scales;
  bool fit_all_scales = false;
  double l1_tol = -1.0, l1_b_tol = -1.0, l2_tol = -1.0, l2_spread_tol = -1.0,
         l3_tol = -1.0;
  CropSpec crop;
  std::string format = "json";
  unsigned threads = 0;
};

int run_verify(const VerifyArgs& a) {
  ImageCube im = apply_crop(load_image(a.input), a.crop);
  if (im.width != im.height) {
    std::cerr << "input is " << im.width << "x" << im.height
              << ": law verification needs a square image; pass "
                 "--crop-square (or --crop x y w h)\n";
    return 3;
  }

  LawConfig config =
      a.tol_synthetic ? LawConfig::synthetic() : LawConfig{};
  config.k_step = a.k_step;
  config.s_max = a.s_max;
  config.fit_all_scales = a.fit_all_scales;
  config.threads = a.threads;
  if (!a.probe_scales.empty()) config.probe_scales = a.probe_scales;
  if (a.l1_tol >= 0) config.l1_slope_tol = a.l1_tol;
  if (a.l1_b_tol >= 0) config.l1_intercept_tol = a.l1_b_tol;
  if (a.l2_tol >= 0) config.l2_tol = a.l2_tol;
  if (a.l2_spread_tol >= 0) config.l2_spread_tol = a.l2_spread_tol;
  if (a.l3_tol >= 0) config.l3_tol = a.l3_tol;

  LawReport rep = verify_laws(im, config);
  rep.provenance = a.input;
  const std::string sidecar_prov = load_provenance(a.input);
  if (!sidecar_prov.empty()) rep.provenance += " [" + sidecar_prov + "]";

  const nlohmann::json j = report_to_json(rep);
  if (!a.output.empty()) {
    write_text_file(a.output, j.dump(2) + "\n");
    if (a.format == "csv" || a.format == "both") {
      const std::string prefix = stem_of(a.output);
      write_text_file(prefix + "_surface.csv", surface_csv(rep.surface));
      write_text_file(prefix + "_omega.csv", omega_csv(rep.l3_omegas));
      write_text_file(prefix + "_abundance.csv",
                      abundance_csv(rep.abundance));
    }
  } else {
    std::cout << j.dump(2) << "\n";
  }

  std::cout << "L1 slope=" << fmt(rep.l1_fit.a)
            << " intercept=" << fmt(rep.l1_fit.b)
            << " sigma_a=" << fmt(rep.l1_fit.sigma_a)
            << " pass=" << (rep.l1_pass ? "true" : "false") << "\n"
            << "L2 mean=" << fmt(rep.l2_mean)
            << " spread=" << fmt(rep.l2_spread)
            << " pass=" << (rep.l2_pass ? "true" : "false") << "\n"
            << "L3 max_dev=" << fmt(rep.l3_max_dev) << " at k="
            << rep.l3_worst_k << " pass=" << (rep.l3_pass ? "true" : "false")
            << "\n";

  std::vector<std::string> expect = a.expect;
  if (expect.empty()) expect = {"L1", "L2", "L3"};
  bool all_pass = true;
  for (const std::string& law : expect) {
    bool pass = false;
    if (law == "L1")
      pass = rep.l1_pass;
    else if (law == "L2")
      pass = rep.l2_pass;
    else if (law == "L3")
      pass = rep.l3_pass;
    else {
      std::cerr << "unknown law in --expect: " << law << "\n";
      return 2;
    }
    if (!pass) all_pass = false;
  }
  std::cout << "verdict: " << (all_pass ? "PASS" : "FAIL") << "\n";
  if (a.strict && !all_pass) return 4;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiscale entropy scaling-law toolkit"};
  app.set_version_flag("--version", std::string(scalelaws::kVersion));
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* cg = app.add_subcommand(
      "generate", "write a synthetic test image (RAW + JSON sidecar)");
  cg->add_option("family", gen.family, "plane|random|hilbert|pavement")
      ->required();
  cg->add_option("--n", gen.n, "side length (plane, random)")
      ->check(CLI::PositiveNumber);
  cg->add_option("--m", gen.m, "refinement levels, side 2^m (hilbert)")
      ->check(CLI::PositiveNumber);
  cg->add_option("--seed", gen.seed, "random seed (random, hilbert)");
  cg->add_flag("--randomized", gen.randomized,
               "draw a fresh subdivision permutation per cell (hilbert)");
  cg->add_flag("--per-level", gen.per_level,
               "one random permutation per refinement level (hilbert)");
  cg->add_option("--rows", gen.rows, "rows, multiple of 2 (pavement)")
      ->check(CLI::PositiveNumber);
  cg->add_option("--cols", gen.cols, "columns, multiple of 8 (pavement)")
      ->check(CLI::PositiveNumber);
  cg->add_option("-o,--output", gen.output, "output payload path (.bin)")
      ->required();

  AnalyzeArgs an;
  CLI::App* ca = app.add_subcommand(
      "analyze", "sweep entropy surfaces and fluctuation statistics");
  ca->add_option("input", an.input, "image path (PNM or RAW+sidecar)")
      ->required();
  ca->add_option("-o,--output", an.output,
                 "output prefix (default: input stem)");
  ca->add_option("--k-step", an.k_step, "stride through k = 1..k_max")
      ->check(CLI::PositiveNumber);
  ca->add_option("--s-max", an.s_max,
                 "largest scale in the sweep (default min(W,H)/2)")
      ->check(CLI::PositiveNumber);
  ca->add_option("--delta-k", an.delta_k,
                 "k at which the per-scale entropy increments are exported")
      ->check(CLI::PositiveNumber);
  ca->add_option("--crop", an.crop.window, "crop window: x y w h")
      ->expected(4);
  ca->add_flag("--crop-square", an.crop.to_square,
               "crop to the top-left square before analysis");
  ca->add_option("--format", an.format, "csv|json|both (default csv)")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  ca->add_option("--emit-pattern-map", an.pattern_map_at,
                 "write the class map at cascade cell: k s")
      ->expected(2);
  ca->add_option("--threads", an.threads,
                 "worker count (default: SCALELAWS_THREADS or all cores)");

  VerifyArgs ver;
  CLI::App* cv = app.add_subcommand(
      "verify", "check the three scaling laws and emit a JSON report");
  cv->add_option("input", ver.input, "image path (PNM or RAW+sidecar)")
      ->required();
  cv->add_option("-o,--output", ver.output,
                 "report path (default: print to stdout)");
  cv->add_flag("--strict", ver.strict,
               "exit 4 when a law named in --expect fails");
  cv->add_option("--expect", ver.expect,
                 "laws that must pass under --strict, e.g. L1,L3")
      ->delimiter(',');
  cv->add_flag("--tol-synthetic", ver.tol_synthetic,
               "widened tolerance preset for synthetic generator output");
  cv->add_option("--k-step", ver.k_step, "stride through k = 1..k_max")
      ->check(CLI::PositiveNumber);
  cv->add_option("--s-max", ver.s_max,
                 "largest scale in the sweep (default min(W,H)/2)")
      ->check(CLI::PositiveNumber);
  cv->add_option("--probe-scales", ver.probe_scales,
                 "scales probed for the L2 maximum (default 1,2,4,8,16)")
      ->delimiter(',');
  cv->add_flag("--fit-all-scales", ver.fit_all_scales,
               "fit L1 over every scale instead of the dividing scales");
  cv->add_option("--l1-tol", ver.l1_tol, "override L1 slope tolerance");
  cv->add_option("--l1-intercept-tol", ver.l1_b_tol,
                 "override L1 intercept tolerance");
  cv->add_option("--l2-tol", ver.l2_tol, "override L2 value tolerance");
  cv->add_option("--l2-spread-tol", ver.l2_spread_tol,
                 "override L2 constancy tolerance");
  cv->add_option("--l3-tol", ver.l3_tol, "override L3 tolerance");
  cv->add_option("--crop", ver.crop.window, "crop window: x y w h")
      ->expected(4);
  cv->add_flag("--crop-square", ver.crop.to_square,
               "crop to the top-left square before analysis");
  cv->add_option("--format", ver.format,
                 "json|csv|both (csv bundles need -o; default json)")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  cv->add_option("--threads", ver.threads,
                 "worker count (default: SCALELAWS_THREADS or all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the error message
    return 2;
  }

  try {
    if (app.got_subcommand(cg)) return run_generate(gen);
    if (app.got_subcommand(ca)) return run_analyze(an);
    if (app.got_subcommand(cv)) return run_verify(ver);
    std::cerr << "no command given\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    // Shape/precondition violations: wrong dimensions, crop out of bounds,
    // dtype refusals.
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
