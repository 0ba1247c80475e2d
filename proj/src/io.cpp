#include "swb/io.hpp"

#include <png.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace swb {

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

DiscreteMeasure from_rows(std::vector<std::array<double, 3>> rows, const std::string& path) {
  if (rows.empty()) throw std::runtime_error(path + ": empty point cloud");
  Matrix s(Eigen::Index(rows.size()), 3);
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    s.row(i) << rows[i][0], rows[i][1], rows[i][2];
  return DiscreteMeasure::uniform(std::move(s));
}

DiscreteMeasure load_xyz(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<std::array<double, 3>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::array<double, 3> r{};
    if (!(ss >> r[0])) {
      std::string probe;
      std::istringstream ss2(line);
      if (ss2 >> probe) parse_fail(path, lineno, "expected three coordinates");
      continue;  // blank line
    }
    if (!(ss >> r[1] >> r[2])) parse_fail(path, lineno, "expected three coordinates");
    double extra;
    if (ss >> extra) parse_fail(path, lineno, "trailing data after three coordinates");
    rows.push_back(r);
  }
  return from_rows(std::move(rows), path);
}

DiscreteMeasure load_ply(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::string line;
  int lineno = 0;
  long vertex_count = -1;
  int x_idx = -1, y_idx = -1, z_idx = -1;
  int prop_idx = 0;
  bool in_vertex_element = false;
  bool header_done = false;

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (lineno == 1) {
      if (tok != "ply") parse_fail(path, lineno, "missing ply magic");
      continue;
    }
    if (tok == "format") {
      std::string fmt;
      ss >> fmt;
      if (fmt != "ascii") parse_fail(path, lineno, "only ascii PLY is supported");
    } else if (tok == "element") {
      std::string name;
      long count;
      ss >> name >> count;
      in_vertex_element = name == "vertex";
      if (in_vertex_element) vertex_count = count;
      prop_idx = 0;
    } else if (tok == "property" && in_vertex_element) {
      std::string type, name;
      ss >> type >> name;
      if (name == "x") x_idx = prop_idx;
      if (name == "y") y_idx = prop_idx;
      if (name == "z") z_idx = prop_idx;
      ++prop_idx;
    } else if (tok == "end_header") {
      header_done = true;
      break;
    }
  }
  if (!header_done) parse_fail(path, lineno, "unterminated PLY header");
  if (vertex_count < 1) parse_fail(path, lineno, "no vertex element");
  if (x_idx < 0 || y_idx < 0 || z_idx < 0)
    parse_fail(path, lineno, "vertex element lacks x/y/z properties");

  std::vector<std::array<double, 3>> rows;
  rows.reserve(size_t(vertex_count));
  for (long v = 0; v < vertex_count; ++v) {
    if (!std::getline(in, line)) parse_fail(path, lineno, "truncated vertex data");
    ++lineno;
    std::istringstream ss(line);
    std::vector<double> vals;
    double x;
    while (ss >> x) vals.push_back(x);
    if (int(vals.size()) < prop_idx) parse_fail(path, lineno, "short vertex row");
    rows.push_back({vals[size_t(x_idx)], vals[size_t(y_idx)], vals[size_t(z_idx)]});
  }
  return from_rows(std::move(rows), path);
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

DiscreteMeasure load_pointcloud(const std::string& path, PointCloudFormat format) {
  return format == PointCloudFormat::AsciiPly ? load_ply(path) : load_xyz(path);
}

DiscreteMeasure load_pointcloud(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  return load_pointcloud(path, ext == ".ply" ? PointCloudFormat::AsciiPly
                                             : PointCloudFormat::XyzText);
}

void save_matrix_txt(const Matrix& m, const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw std::runtime_error(path + ": cannot open for writing");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      std::fprintf(f.get(), j ? " %.17g" : "%.17g", m(i, j));
    std::fputc('\n', f.get());
  }
}

Matrix load_matrix_txt(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<double> r;
    double x;
    while (ss >> x) r.push_back(x);
    if (r.empty()) continue;
    if (!rows.empty() && r.size() != rows.front().size())
      parse_fail(path, lineno, "ragged row");
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty matrix");
  Matrix m(Eigen::Index(rows.size()), Eigen::Index(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rows[size_t(i)][size_t(j)];
  return m;
}

ImagePalette load_image_palette(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw std::runtime_error(path + ": cannot open");
  png_byte header[8];
  if (std::fread(header, 1, 8, f.get()) != 8 || png_sig_cmp(header, 0, 8))
    throw std::runtime_error(path + ": not a PNG file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info) throw std::runtime_error("libpng initialization failed");
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error(path + ": PNG decode error");
  }
  png_init_io(png, f.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_byte color_type = png_get_color_type(png, info);
  const png_byte bit_depth = png_get_bit_depth(png, info);
  if (bit_depth != 8 ||
      (color_type != PNG_COLOR_TYPE_RGB && color_type != PNG_COLOR_TYPE_RGB_ALPHA)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error(path + ": only 8-bit RGB/RGBA PNG is supported");
  }
  if (color_type == PNG_COLOR_TYPE_RGB_ALPHA) png_set_strip_alpha(png);

  const int width = int(png_get_image_width(png, info));
  const int height = int(png_get_image_height(png, info));
  std::vector<png_byte> data(size_t(width) * size_t(height) * 3);
  std::vector<png_bytep> row_ptrs(static_cast<size_t>(height));
  for (int y = 0; y < height; ++y) row_ptrs[size_t(y)] = data.data() + size_t(y) * size_t(width) * 3;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  ImagePalette pal;
  pal.width = width;
  pal.height = height;
  pal.pixels.resize(Eigen::Index(width) * Eigen::Index(height), 3);
  for (Eigen::Index i = 0; i < pal.pixels.rows(); ++i)
    for (Eigen::Index c = 0; c < 3; ++c)
      pal.pixels(i, c) = double(data[size_t(i) * 3 + size_t(c)]);
  return pal;
}

DiscreteMeasure palette_measure(const ImagePalette& palette) {
  return DiscreteMeasure::uniform(palette.pixels);
}

void write_image_palette(const ImagePalette& palette, const Matrix& colors,
                         const std::string& path) {
  const Eigen::Index n = Eigen::Index(palette.width) * Eigen::Index(palette.height);
  if (colors.rows() != n || colors.cols() != 3)
    throw std::invalid_argument("write_image_palette: color matrix shape mismatch");

  std::vector<png_byte> data(size_t(n) * 3);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index c = 0; c < 3; ++c) {
      const double v = std::round(std::min(255.0, std::max(0.0, colors(i, c))));
      data[size_t(i) * 3 + size_t(c)] = png_byte(v);
    }

  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw std::runtime_error(path + ": cannot open for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info) throw std::runtime_error("libpng initialization failed");
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error(path + ": PNG encode error");
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, png_uint_32(palette.width), png_uint_32(palette.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> row_ptrs(size_t(palette.height));
  for (int y = 0; y < palette.height; ++y)
    row_ptrs[size_t(y)] = data.data() + size_t(y) * size_t(palette.width) * 3;
  png_write_image(png, row_ptrs.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_metrics_csv(const RunTrace& trace, const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw std::runtime_error(path + ": cannot open for writing");
  std::fprintf(f.get(), "iteration,F,W,objective\n");
  for (const auto& r : trace.records)
    std::fprintf(f.get(), "%d,%.17g,%.17g,%.17g\n", r.iteration, r.F, r.W, r.objective);
}

std::vector<MetricsRecord> read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::string line;
  if (!std::getline(in, line) || line != "iteration,F,W,objective")
    throw std::runtime_error(path + ":1: bad metrics header");
  std::vector<MetricsRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    MetricsRecord r;
    if (std::sscanf(line.c_str(), "%d,%lg,%lg,%lg", &r.iteration, &r.F, &r.W,
                    &r.objective) != 4)
      parse_fail(path, lineno, "bad metrics row");
    out.push_back(r);
  }
  return out;
}

}  // namespace swb
