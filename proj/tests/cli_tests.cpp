// End-to-end tests of the command-line tool: exit-code contract, file
// outputs, and byte-for-byte reproducibility of repeated runs.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#ifndef SCALELAWS_CLI_PATH
#error "SCALELAWS_CLI_PATH must point at the built binary"
#endif

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + SCALELAWS_CLI_PATH + "\" " +
                          args + " > cli_t_stdout.txt 2> cli_t_stderr.txt";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool file_exists(const std::string& path) {
  return std::ifstream(path).good();
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  REQUIRE(run_cli("") == 2);
  REQUIRE(run_cli("frobnicate") == 2);
  REQUIRE(run_cli("generate plane") == 2);  // missing -o
  REQUIRE(run_cli("generate hilbert --m 7.5 -o cli_t_bad.bin") == 2);
  REQUIRE(run_cli("generate hilbert --m 0 -o cli_t_bad.bin") == 2);
  REQUIRE(run_cli("generate warp --n 8 -o cli_t_bad.bin") == 2);
  REQUIRE(run_cli("analyze cli_t_missing.bin --format xml") == 2);
  REQUIRE_FALSE(file_exists("cli_t_bad.bin"));
}

TEST_CASE("help and version exit cleanly") {
  REQUIRE(run_cli("--help") == 0);
  REQUIRE(run_cli("generate --help") == 0);
  REQUIRE(run_cli("--version") == 0);
}

TEST_CASE("I/O failures exit with code 1") {
  REQUIRE(run_cli("analyze cli_t_missing.bin") == 1);
  REQUIRE(run_cli("verify cli_t_missing.bin") == 1);
}

TEST_CASE("generate writes the payload, sidecar, and census summary") {
  REQUIRE(run_cli("generate plane --n 16 -o cli_t_plane16.bin") == 0);
  REQUIRE(file_exists("cli_t_plane16.bin"));
  REQUIRE(file_exists("cli_t_plane16.json"));

  const nlohmann::json meta =
      nlohmann::json::parse(slurp("cli_t_plane16.json"));
  REQUIRE(meta.at("width").get<int>() == 16);
  REQUIRE(meta.at("height").get<int>() == 16);
  REQUIRE(meta.at("channels").get<int>() == 2);
  REQUIRE(meta.at("dtype").get<std::string>() == "u8");
  REQUIRE(meta.at("dynamics").get<double>() == 32.0);
  REQUIRE(meta.at("layout").get<std::string>() == "row-major-channel-last");
  REQUIRE(meta.at("provenance").get<std::string>() == "gen_plane(n=16)");

  const std::string summary = slurp("cli_t_stdout.txt");
  REQUIRE(summary.find("fraction=1") != std::string::npos);
  REQUIRE(summary.find("fci=true") != std::string::npos);
}

TEST_CASE("non-square input exits 3 unless a square crop is requested") {
  REQUIRE(run_cli("generate pavement --rows 8 --cols 16 -o cli_t_pav.bin") ==
          0);
  REQUIRE(run_cli("analyze cli_t_pav.bin -o cli_t_pav") == 3);
  REQUIRE(run_cli("verify cli_t_pav.bin") == 3);
  REQUIRE(run_cli("analyze cli_t_pav.bin -o cli_t_pav --crop-square") == 0);
  REQUIRE(run_cli("verify cli_t_pav.bin --crop-square -o cli_t_pav_rep.json") ==
          0);
  REQUIRE(run_cli("analyze cli_t_pav.bin -o cli_t_pav --crop 0 0 1 8") == 3);
}

TEST_CASE("strict verification gates the exit code on the expected laws") {
  REQUIRE(run_cli("generate plane --n 64 -o cli_t_plane64.bin") == 0);

  // The log-scale law holds exactly on this image; the pattern-peak law
  // does not hold at this size.
  REQUIRE(run_cli("verify cli_t_plane64.bin --strict --expect L1 "
                  "-o cli_t_p64_rep.json") == 0);
  REQUIRE(run_cli("verify cli_t_plane64.bin --strict --expect L2 "
                  "-o cli_t_p64_rep.json") == 4);
  REQUIRE(run_cli("verify cli_t_plane64.bin --strict --expect L1,L2 "
                  "-o cli_t_p64_rep.json") == 4);
  // Without --strict the failure is reported but the exit stays 0.
  REQUIRE(run_cli("verify cli_t_plane64.bin --expect L2 "
                  "-o cli_t_p64_rep.json") == 0);
  // Unknown law names are usage errors.
  REQUIRE(run_cli("verify cli_t_plane64.bin --strict --expect L9") == 2);
  REQUIRE(slurp("cli_t_stderr.txt").find("L9") != std::string::npos);
}

TEST_CASE("verify report carries the declared schema and law blocks") {
  REQUIRE(run_cli("generate plane --n 16 -o cli_t_plane16.bin") == 0);
  REQUIRE(run_cli("verify cli_t_plane16.bin --tol-synthetic "
                  "-o cli_t_p16_rep.json --format both") == 0);
  const nlohmann::json rep =
      nlohmann::json::parse(slurp("cli_t_p16_rep.json"));
  REQUIRE(rep.at("schema").get<std::string>() == "scalelaws-report/1");
  REQUIRE(rep.at("laws").contains("L1"));
  REQUIRE(rep.at("laws").contains("L2"));
  REQUIRE(rep.at("laws").contains("L3"));
  REQUIRE(rep.at("laws").at("L1").at("pass").get<bool>());
  REQUIRE(rep.at("provenance").get<std::string>().find("gen_plane(n=16)") !=
          std::string::npos);
  // --format both adds the CSV bundles next to the report.
  REQUIRE(file_exists("cli_t_p16_rep_surface.csv"));
  REQUIRE(file_exists("cli_t_p16_rep_omega.csv"));
  REQUIRE(file_exists("cli_t_p16_rep_abundance.csv"));
}

TEST_CASE("analyze writes surfaces, increments, omegas, and pattern maps") {
  REQUIRE(run_cli("generate random --n 16 --seed 5 -o cli_t_rand16.bin") ==
          0);
  REQUIRE(run_cli("analyze cli_t_rand16.bin -o cli_t_r16 --format both "
                  "--emit-pattern-map 2 2") == 0);
  REQUIRE(file_exists("cli_t_r16_surface.csv"));
  REQUIRE(file_exists("cli_t_r16_delta.csv"));
  REQUIRE(file_exists("cli_t_r16_omega.csv"));
  REQUIRE(file_exists("cli_t_r16_provenance.json"));
  REQUIRE(file_exists("cli_t_r16_analysis.json"));
  REQUIRE(file_exists("cli_t_r16_patterns_k2_s2.pgm"));
  REQUIRE(file_exists("cli_t_r16_patterns_k2_s2.csv"));

  REQUIRE(slurp("cli_t_r16_surface.csv").rfind("k,s,S_C,S_H\n", 0) == 0);
  REQUIRE(slurp("cli_t_r16_patterns_k2_s2.pgm").rfind("P5\n", 0) == 0);
  REQUIRE(slurp("cli_t_r16_patterns_k2_s2.csv").rfind("class,count\n", 0) ==
          0);
  const nlohmann::json analysis =
      nlohmann::json::parse(slurp("cli_t_r16_analysis.json"));
  REQUIRE(analysis.contains("surface"));
  REQUIRE(analysis.contains("delta"));
  REQUIRE(analysis.contains("omega_per_k"));

  // Narrowed sweeps are honored.
  REQUIRE(run_cli("analyze cli_t_rand16.bin -o cli_t_r16n --k-step 4 "
                  "--s-max 3") == 0);
  const std::string narrow = slurp("cli_t_r16n_surface.csv");
  REQUIRE(narrow.find("\n1,3,") != std::string::npos);
  REQUIRE(narrow.find("\n1,4,") == std::string::npos);  // s capped at 3
  REQUIRE(narrow.find("\n2,") == std::string::npos);    // k stride of 4
  REQUIRE(narrow.find("\n5,") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
  REQUIRE(run_cli("generate random --n 16 --seed 9 -o cli_t_rep_a.bin") == 0);
  REQUIRE(run_cli("generate random --n 16 --seed 9 -o cli_t_rep_b.bin") == 0);
  REQUIRE(slurp("cli_t_rep_a.bin") == slurp("cli_t_rep_b.bin"));
  REQUIRE(slurp("cli_t_rep_a.json") == slurp("cli_t_rep_b.json"));

  REQUIRE(run_cli("analyze cli_t_rep_a.bin -o cli_t_rep_a1 --format both") ==
          0);
  REQUIRE(run_cli("analyze cli_t_rep_a.bin -o cli_t_rep_a2 --format both") ==
          0);
  for (const char* suffix :
       {"_surface.csv", "_delta.csv", "_omega.csv", "_analysis.json"})
    REQUIRE(slurp(std::string("cli_t_rep_a1") + suffix) ==
            slurp(std::string("cli_t_rep_a2") + suffix));

  REQUIRE(run_cli("verify cli_t_rep_a.bin -o cli_t_rep_v1.json") == 0);
  REQUIRE(run_cli("verify cli_t_rep_a.bin -o cli_t_rep_v2.json") == 0);
  REQUIRE(slurp("cli_t_rep_v1.json") == slurp("cli_t_rep_v2.json"));
}

TEST_CASE("results are independent of the worker-thread count") {
  REQUIRE(run_cli("generate hilbert --m 4 --seed 2 --randomized "
                  "-o cli_t_h4.bin") == 0);
  REQUIRE(run_cli("verify cli_t_h4.bin -o cli_t_h4_t1.json --threads 1") ==
          0);
  REQUIRE(run_cli("verify cli_t_h4.bin -o cli_t_h4_t3.json --threads 3") ==
          0);
  REQUIRE(slurp("cli_t_h4_t1.json") == slurp("cli_t_h4_t3.json"));

  setenv("SCALELAWS_THREADS", "5", 1);
  REQUIRE(run_cli("verify cli_t_h4.bin -o cli_t_h4_env.json") == 0);
  unsetenv("SCALELAWS_THREADS");
  REQUIRE(slurp("cli_t_h4_env.json") == slurp("cli_t_h4_t1.json"));
}
