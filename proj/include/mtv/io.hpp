#pragma once

#include <string>

#include "mtv/grid.hpp"

namespace mtv {

enum class ImageFormat { pgm, png };

struct ImageFile {
  std::string path;
  ImageFormat format = ImageFormat::pgm;
  int width = 0;
  int height = 0;
};

/// Loads an 8-bit grayscale PGM (binary P5) or PNG image; values are mapped
/// to [0,1] by dividing by 255. Color or 16-bit inputs are rejected with a
/// message suggesting external conversion. Rows of the file map to the
/// first index.
PixelImage load_image(const std::string& path);

/// Probes the header without decoding the pixel data.
ImageFile probe_image(const std::string& path);

/// Writes the image as binary PGM or 8-bit grayscale PNG depending on the
/// file extension (.png -> PNG, anything else -> PGM). Values are clamped to
/// [0,1] and quantized by x255 with round-half-even.
void save_image(const PixelImage& img, const std::string& path);

/// Quantization used by save_image, exposed for tests.
unsigned char quantize_byte(double v);

/// One benchmark/denoise result (one row per image and parameter choice).
struct ReportRow {
  std::string image_id;
  double sigma = 0.0;
  double lambda = 0.0;
  double theta = 0.0;
  double psnr_db = 0.0;
  long iterations = 0;
  double runtime_ms = 0.0;
  double objective = 0.0;
};

/// RFC-4180-style CSV with a header row; numbers carry 12 significant
/// digits. An empty row list produces a header-only file.
void write_csv(const std::vector<ReportRow>& rows, const std::string& path);

/// Generic CSV writer for ad-hoc tables (header + preformatted cells).
void write_csv_table(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows, const std::string& path);

/// Minimal CSV reader (no quoted-field support beyond what write_csv emits).
std::vector<std::vector<std::string>> read_csv(const std::string& path);

/// 12-significant-digit number formatting used for CSV cells.
std::string format_number(double v);

}  // namespace mtv
