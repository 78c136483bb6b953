#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "mtv/io.hpp"
#include "mtv/operators.hpp"
#include "mtv/selfcheck.hpp"

using namespace mtv;

namespace {

const char* cli = MTV_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = std::string(cli) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("mtv_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static inline int counter = 0;
};

}  // namespace

TEST_CASE("denoise is deterministic and writes image plus report") {
  TempDir dir;
  const PixelImage clean = synthetic_blocky_image(5, 32, 32);
  const PixelImage noisy = add_gaussian_noise(clean, 0.1, 11);
  const std::string in = dir.file("in.pgm");
  save_image(noisy, in);

  const std::string flags = " --lambda 0.08 --theta 0.4 --tol 1e-9";
  CHECK(run("denoise --input " + in + " --output " + dir.file("o1.pgm") + flags) == 0);
  CHECK(run("denoise --input " + in + " --output " + dir.file("o2.pgm") + flags) == 0);
  CHECK(slurp(dir.file("o1.pgm")) == slurp(dir.file("o2.pgm")));

  // reports agree on everything except wall time
  const auto r1 = read_csv(dir.file("o1.pgm.csv"));
  const auto r2 = read_csv(dir.file("o2.pgm.csv"));
  REQUIRE(r1.size() == 2);
  REQUIRE(r2.size() == 2);
  for (size_t c = 0; c < r1[1].size(); ++c)
    if (r1[0][c] != "runtime_ms" && r1[0][c] != "image_id") CHECK(r1[1][c] == r2[1][c]);
}

TEST_CASE("denoise with lambda zero returns the clamped input") {
  TempDir dir;
  const PixelImage clean = synthetic_blocky_image(6, 16, 16);
  const std::string in = dir.file("in.pgm");
  save_image(clean, in);
  REQUIRE(run("denoise --input " + in + " --output " + dir.file("out.pgm") + " --lambda 0") == 0);
  // intensities are already in [0,1]; the output must reproduce the input bytes
  CHECK(slurp(dir.file("out.pgm")) == slurp(in));
}

TEST_CASE("bad flags exit with code 1") {
  CHECK(run("denoise --input only.pgm") == 1);       // missing required --output
  CHECK(run("unknown-subcommand") == 1);
  CHECK(run("denoise --input nope.pgm --output x.pgm --theta 3") == 1);  // invalid theta
}

TEST_CASE("verify exits 0 and the injected fault flips it") {
  CHECK(run("verify --seed 3") == 0);
  CHECK(run("verify --seed 3 --inject-fault") != 0);
}

TEST_CASE("sweep: degenerate grids give a single row, empty grids exit 1") {
  TempDir dir;
  const PixelImage clean = synthetic_blocky_image(7, 16, 16);
  const std::string in = dir.file("clean.pgm");
  save_image(clean, in);
  const std::string out = dir.file("sweep.csv");
  REQUIRE(run("sweep --input " + in + " --output " + out +
              " --theta-grid 0.4 --lambda-grid 0.1 --sigma 0.05 --max-iter 500 --tol 1e-6") == 0);
  CHECK(read_csv(out).size() == 2);  // header + one row

  REQUIRE(run("sweep --input " + in + " --output " + dir.file("s2.csv") +
              " --theta-grid 0,0.5,1 --lambda-grid 0.05,0.1 --sigma 0.05 --max-iter 500 --tol 1e-6") == 0);
  CHECK(read_csv(dir.file("s2.csv")).size() == 1 + 3 * 2);

  CHECK(run("sweep --input " + in + " --output " + dir.file("s3.csv") + " --theta-grid , ") == 1);
}

TEST_CASE("refine reports constant objectives across levels") {
  TempDir dir;
  const PixelImage clean = synthetic_blocky_image(8, 16, 16);
  const std::string in = dir.file("in.pgm");
  save_image(add_gaussian_noise(clean, 0.08, 3), in);
  const std::string out = dir.file("refine.csv");
  CHECK(run("refine --input " + in + " --output " + out + " --levels 4 --lambda 0.05") == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][0] == "4");

  CHECK(run("refine --input " + in + " --output " + dir.file("r2.csv") +
            " --levels 4,5 --lambda 0.05 --tol 1e-12") == 0);
  const auto rows2 = read_csv(dir.file("r2.csv"));
  REQUIRE(rows2.size() == 3);
  CHECK(std::abs(std::stod(rows2[1][1]) - std::stod(rows2[2][1])) <= 1e-8);
  CHECK(std::stod(rows2[2][3]) <= 1e-6);  // minimizer deviation

  CHECK(run("refine --input " + in + " --levels 3 --lambda 0.05") == 1);  // below native
}

TEST_CASE("bench runs a tiny corpus and rejects an empty directory") {
  TempDir dir;
  std::filesystem::create_directories(dir.file("corpus"));
  save_image(synthetic_blocky_image(9, 24, 24), dir.file("corpus/a.pgm"));
  save_image(synthetic_blocky_image(10, 24, 24), dir.file("corpus/b.png"));
  const std::string out = dir.file("bench.csv");
  REQUIRE(run("bench --data-dir " + dir.file("corpus") + " --output " + out +
              " --sigmas 0.1 --jobs 2 --theta-evals 4 --lambda-evals 4 --tol 1e-5 --max-iter 600") == 0);
  const auto rows = read_csv(out);
  CHECK(rows.size() == 1 + 2 * 2);  // 2 images x {tv, mtv}

  std::filesystem::create_directories(dir.file("empty"));
  CHECK(run("bench --data-dir " + dir.file("empty") + " --sigmas 0.1") == 1);
}
