#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "swb/io.hpp"
#include "swb/slicing.hpp"

using namespace swb;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("swb_io_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("xyz point cloud parsing") {
  TempDir tmp;
  {
    std::ofstream out(tmp.file("tri.xyz"));
    out << "0 0 0\n1 0 0\n0 1 0\n";
  }
  const auto m = load_pointcloud(tmp.file("tri.xyz"));
  CHECK(m.size() == 3);
  CHECK(m.dim() == 3);
  CHECK(m.weights[0] == doctest::Approx(1.0 / 3.0));
  CHECK(m.supports(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("xyz rejects malformed rows with a line number") {
  TempDir tmp;
  {
    std::ofstream out(tmp.file("bad.xyz"));
    out << "0 0 0\n1 2\n";
  }
  try {
    load_pointcloud(tmp.file("bad.xyz"));
    FAIL("expected parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
}

TEST_CASE("ascii ply parsing") {
  TempDir tmp;
  {
    std::ofstream out(tmp.file("cloud.ply"));
    out << "ply\nformat ascii 1.0\nelement vertex 4\n"
           "property float x\nproperty float y\nproperty float z\n"
           "end_header\n"
           "0 0 0\n1 1 1\n2 0 1\n0.5 0.25 0.125\n";
  }
  const auto m = load_pointcloud(tmp.file("cloud.ply"));
  CHECK(m.size() == 4);
  CHECK(m.supports(3, 2) == doctest::Approx(0.125));
}

TEST_CASE("point cloud write-read round trip") {
  TempDir tmp;
  Rng rng(4);
  Matrix s(16, 3);
  for (Eigen::Index i = 0; i < 16; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) s(i, j) = rng.normal();
  save_matrix_txt(s, tmp.file("cloud.xyz"));
  const auto m = load_pointcloud(tmp.file("cloud.xyz"));
  CHECK((m.supports - s).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("png palette round trip and clamping") {
  TempDir tmp;
  ImagePalette pal;
  pal.width = 2;
  pal.height = 2;
  pal.pixels.resize(4, 3);
  pal.pixels << 255, 0, 0, 255, 0, 0, 255, 0, 0, 255, 0, 0;
  write_image_palette(pal, pal.pixels, tmp.file("red.png"));

  const auto loaded = load_image_palette(tmp.file("red.png"));
  CHECK(loaded.width == 2);
  CHECK(loaded.height == 2);
  CHECK((loaded.pixels - pal.pixels).cwiseAbs().maxCoeff() == 0.0);
  const auto m = palette_measure(loaded);
  CHECK(m.size() == 4);
  CHECK(m.supports(0, 0) == doctest::Approx(255.0));

  // clamp and round on write
  Matrix wild(4, 3);
  wild << -3.2, 260.0, 128.4, 0, 0, 0, 10.6, 10.4, 255.0, 1, 2, 3;
  write_image_palette(pal, wild, tmp.file("clamped.png"));
  const auto back = load_image_palette(tmp.file("clamped.png"));
  CHECK(back.pixels(0, 0) == 0.0);
  CHECK(back.pixels(0, 1) == 255.0);
  CHECK(back.pixels(0, 2) == 128.0);
  CHECK(back.pixels(2, 0) == 11.0);
  CHECK(back.pixels(2, 1) == 10.0);
}

TEST_CASE("png writer rejects shape mismatch; reader rejects non-PNG") {
  TempDir tmp;
  ImagePalette pal;
  pal.width = 2;
  pal.height = 1;
  pal.pixels = Matrix::Zero(2, 3);
  CHECK_THROWS_AS(write_image_palette(pal, Matrix::Zero(3, 3), tmp.file("x.png")),
                  std::invalid_argument);
  {
    std::ofstream out(tmp.file("not.png"));
    out << "this is not a png";
  }
  CHECK_THROWS_AS(load_image_palette(tmp.file("not.png")), std::runtime_error);
}

TEST_CASE("metrics csv round trip") {
  TempDir tmp;
  RunTrace trace;
  trace.records.push_back({0, 1.5, 2.5, 3.0});
  trace.records.push_back({1000, 0.123456789012345678, 1e-17, -2.75});
  write_metrics_csv(trace, tmp.file("metrics.csv"));

  const auto rows = read_metrics_csv(tmp.file("metrics.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].iteration == 0);
  CHECK(rows[0].F == 1.5);
  CHECK(rows[1].F == trace.records[1].F);
  CHECK(rows[1].W == trace.records[1].W);
  CHECK(rows[1].objective == -2.75);

  // empty trace -> header only
  write_metrics_csv(RunTrace{}, tmp.file("empty.csv"));
  std::ifstream in(tmp.file("empty.csv"));
  std::string line;
  CHECK(std::getline(in, line));
  CHECK(line == "iteration,F,W,objective");
  CHECK(!std::getline(in, line));
}

TEST_CASE("writers are byte-deterministic") {
  TempDir tmp;
  RunTrace trace;
  trace.records.push_back({5, 0.1, 0.2, 0.3});
  write_metrics_csv(trace, tmp.file("a.csv"));
  write_metrics_csv(trace, tmp.file("b.csv"));
  std::ifstream a(tmp.file("a.csv"), std::ios::binary), b(tmp.file("b.csv"), std::ios::binary);
  const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
}
