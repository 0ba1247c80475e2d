#pragma once

#include <string>

#include "swb/optimizer.hpp"

namespace swb {

enum class PointCloudFormat { XyzText, AsciiPly };

struct ImagePalette {
  int width = 0;
  int height = 0;
  Matrix pixels;  // (width*height) x 3, row-major pixel order, values in [0,255]
};

// Format inferred from the extension (.ply -> ASCII PLY, otherwise XYZ
// text: one whitespace-separated x y z triple per line).
DiscreteMeasure load_pointcloud(const std::string& path);
DiscreteMeasure load_pointcloud(const std::string& path, PointCloudFormat format);

// Whitespace-separated text, one support row per line, %.17g columns.
void save_matrix_txt(const Matrix& m, const std::string& path);
Matrix load_matrix_txt(const std::string& path);

// 8-bit RGB (or RGBA; alpha discarded) PNG decode. Other color types are
// rejected.
ImagePalette load_image_palette(const std::string& path);
DiscreteMeasure palette_measure(const ImagePalette& palette);

// Clamp to [0,255], round to nearest, encode as 8-bit RGB PNG in the
// palette's pixel order.
void write_image_palette(const ImagePalette& palette, const Matrix& colors,
                         const std::string& path);

// Header `iteration,F,W,objective`, floats with 17 significant digits.
void write_metrics_csv(const RunTrace& trace, const std::string& path);
std::vector<MetricsRecord> read_metrics_csv(const std::string& path);

}  // namespace swb
