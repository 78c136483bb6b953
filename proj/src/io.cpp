#include "mtv/io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mtv {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

int read_pgm_token(std::istream& in) {
  // Skips whitespace and '#' comments, then reads one nonnegative integer.
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      in.unget();
      break;
    }
  }
  int value = -1;
  in >> value;
  return value;
}

PixelImage from_bytes(const std::vector<unsigned char>& bytes, int width, int height) {
  Array2D a(height, width);
  for (int i = 0; i < height; ++i)
    for (int j = 0; j < width; ++j) a(i, j) = bytes[static_cast<size_t>(i) * width + j] / 255.0;
  return PixelImage::rectangular(std::move(a));
}

PixelImage load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("load_image: cannot open '" + path + "'");
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '5')
    fail("load_image: '" + path + "' is not a binary (P5) PGM file");
  const int width = read_pgm_token(in);
  const int height = read_pgm_token(in);
  const int maxval = read_pgm_token(in);
  if (width <= 0 || height <= 0) fail("load_image: corrupt PGM header in '" + path + "'");
  if (maxval != 255)
    fail("load_image: only 8-bit PGM is supported (maxval 255), got maxval " +
         std::to_string(maxval));
  in.get();  // single whitespace after maxval
  std::vector<unsigned char> bytes(static_cast<size_t>(width) * height);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<size_t>(in.gcount()) != bytes.size())
    fail("load_image: truncated PGM data in '" + path + "'");
  return from_bytes(bytes, width, height);
}

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* fp = nullptr;
  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

PixelImage load_png(const std::string& path) {
  PngReader r;
  r.fp = std::fopen(path.c_str(), "rb");
  if (!r.fp) fail("load_image: cannot open '" + path + "'");
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!r.png) fail("load_image: libpng init failed");
  r.info = png_create_info_struct(r.png);
  if (!r.info) fail("load_image: libpng init failed");
  if (setjmp(png_jmpbuf(r.png))) fail("load_image: corrupt PNG file '" + path + "'");
  png_init_io(r.png, r.fp);
  png_read_info(r.png, r.info);

  const png_uint_32 width = png_get_image_width(r.png, r.info);
  const png_uint_32 height = png_get_image_height(r.png, r.info);
  const int color = png_get_color_type(r.png, r.info);
  const int depth = png_get_bit_depth(r.png, r.info);
  if (color != PNG_COLOR_TYPE_GRAY)
    fail("load_image: '" + path + "' is not grayscale; convert it externally first");
  if (depth > 8) fail("load_image: 16-bit PNG is not supported; convert to 8-bit first");
  if (depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
  png_read_update_info(r.png, r.info);

  std::vector<unsigned char> bytes(static_cast<size_t>(width) * height);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 i = 0; i < height; ++i) rows[i] = bytes.data() + static_cast<size_t>(i) * width;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return from_bytes(bytes, static_cast<int>(width), static_cast<int>(height));
}

bool has_png_magic(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("load_image: file not found: '" + path + "'");
  unsigned char sig[8] = {0};
  in.read(reinterpret_cast<char*>(sig), 8);
  static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  return in.gcount() == 8 && std::memcmp(sig, png_sig, 8) == 0;
}

}  // namespace

PixelImage load_image(const std::string& path) {
  if (has_png_magic(path)) return load_png(path);
  return load_pgm(path);
}

ImageFile probe_image(const std::string& path) {
  const PixelImage img = load_image(path);
  ImageFile f;
  f.path = path;
  f.format = has_png_magic(path) ? ImageFormat::png : ImageFormat::pgm;
  f.width = img.cols();
  f.height = img.rows();
  return f;
}

unsigned char quantize_byte(double v) {
  if (v < 0.0) v = 0.0;
  if (v > 1.0) v = 1.0;
  const double x = v * 255.0;
  double r = std::floor(x + 0.5);
  // round-half-even: break exact .5 ties toward the even integer
  if (r - x == 0.5 && std::fmod(r, 2.0) != 0.0) r -= 1.0;
  return static_cast<unsigned char>(r);
}

namespace {

std::vector<unsigned char> to_bytes(const PixelImage& img) {
  std::vector<unsigned char> bytes(img.values().size());
  for (size_t k = 0; k < bytes.size(); ++k) bytes[k] = quantize_byte(img.values().data()[k]);
  return bytes;
}

void save_pgm(const PixelImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("save_image: cannot write '" + path + "'");
  out << "P5\n" << img.cols() << " " << img.rows() << "\n255\n";
  const std::vector<unsigned char> bytes = to_bytes(img);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail("save_image: write failure on '" + path + "'");
}

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* fp = nullptr;
  ~PngWriter() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

void save_png(const PixelImage& img, const std::string& path) {
  PngWriter w;
  w.fp = std::fopen(path.c_str(), "wb");
  if (!w.fp) fail("save_image: cannot write '" + path + "'");
  w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!w.png) fail("save_image: libpng init failed");
  w.info = png_create_info_struct(w.png);
  if (!w.info) fail("save_image: libpng init failed");
  if (setjmp(png_jmpbuf(w.png))) fail("save_image: libpng failure writing '" + path + "'");
  png_init_io(w.png, w.fp);
  png_set_IHDR(w.png, w.info, img.cols(), img.rows(), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);
  const std::vector<unsigned char> bytes = to_bytes(img);
  std::vector<png_bytep> rows(img.rows());
  for (int i = 0; i < img.rows(); ++i)
    rows[i] = const_cast<png_bytep>(bytes.data() + static_cast<size_t>(i) * img.cols());
  png_write_image(w.png, rows.data());
  png_write_end(w.png, nullptr);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void save_image(const PixelImage& img, const std::string& path) {
  if (ends_with(path, ".png") || ends_with(path, ".PNG"))
    save_png(img, path);
  else
    save_pgm(img, path);
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_csv(const std::vector<ReportRow>& rows, const std::string& path) {
  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  for (const ReportRow& r : rows)
    cells.push_back({r.image_id, format_number(r.sigma), format_number(r.lambda),
                     format_number(r.theta), format_number(r.psnr_db),
                     std::to_string(r.iterations), format_number(r.runtime_ms),
                     format_number(r.objective)});
  write_csv_table({"image_id", "sigma", "lambda", "theta", "psnr_db", "iterations", "runtime_ms",
                   "objective"},
                  cells, path);
}

void write_csv_table(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("write_csv: cannot write '" + path + "'");
  auto emit_row = [&out](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        out << '"';
        for (char ch : c) {
          if (ch == '"') out << '"';
          out << ch;
        }
        out << '"';
      } else {
        out << c;
      }
    }
    out << "\r\n";
  };
  emit_row(header);
  for (const auto& r : rows) emit_row(r);
  if (!out) fail("write_csv: write failure on '" + path + "'");
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("read_csv: cannot open '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            cell += '"';
            ++i;
          } else {
            quoted = false;
          }
        } else {
          cell += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += c;
      }
    }
    cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace mtv
