#include "gsrnls/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include <png.h>

#include "gsrnls/errors.hpp"

namespace gsrnls {

namespace {

unsigned char quantize(double v) {
  const double c = std::round(std::min(255.0, std::max(0.0, v)));
  return static_cast<unsigned char>(c);
}

std::string lower_ext(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) {
    return "";
  }
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// Reads one whitespace-delimited token, skipping '#' comments per the
// netpbm header grammar.
std::string next_pgm_token(std::istream& in) {
  std::string tok;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') {
        c = in.get();
      }
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  return tok;
}

int parse_dim(const std::string& tok, const std::string& what,
              const std::string& path) {
  if (tok.empty() ||
      !std::all_of(tok.begin(), tok.end(),
                   [](unsigned char c) { return std::isdigit(c) != 0; })) {
    throw FormatError("malformed PGM " + what + " in " + path);
  }
  long v = std::strtol(tok.c_str(), nullptr, 10);
  if (v <= 0 || v > 1 << 20) {
    throw FormatError("PGM " + what + " out of range in " + path);
  }
  return static_cast<int>(v);
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) {
      std::fclose(f);
    }
  }
};

using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
  (void)png;
  throw FormatError(std::string("libpng: ") + msg);
}

void png_warn_fn(png_structp, png_const_charp) {}

} // namespace

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (in.gcount() != 2 || magic[0] != 'P') {
    throw FormatError("not a PGM file: " + path);
  }
  if (magic[1] == '2') {
    throw FormatError("ASCII (P2) PGM is not supported: " + path);
  }
  if (magic[1] != '5') {
    throw FormatError("unsupported netpbm variant in " + path);
  }
  const int width = parse_dim(next_pgm_token(in), "width", path);
  const int height = parse_dim(next_pgm_token(in), "height", path);
  const std::string maxval = next_pgm_token(in);
  if (maxval != "255") {
    throw FormatError("only maxval 255 PGM is supported: " + path);
  }
  // The header is terminated by exactly one whitespace byte, already
  // consumed by the token reader.
  GrayImage img(width, height);
  std::vector<unsigned char> row(static_cast<std::size_t>(width));
  for (int r = 0; r < height; ++r) {
    in.read(reinterpret_cast<char*>(row.data()), width);
    if (in.gcount() != width) {
      throw FormatError("truncated PGM raster in " + path);
    }
    for (int c = 0; c < width; ++c) {
      img.at(r, c) = static_cast<double>(row[c]);
    }
  }
  return img;
}

void write_pgm(const GrayImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(img.width));
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      row[c] = quantize(img.at(r, c));
    }
    out.write(reinterpret_cast<const char*>(row.data()), img.width);
  }
  out.flush();
  if (!out) {
    throw IoError("write failed for " + path);
  }
}

GrayImage read_png(const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) {
    throw IoError("cannot open " + path);
  }
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw FormatError("not a PNG file: " + path);
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                           png_error_fn, png_warn_fn);
  if (!png) {
    throw IoError("png_create_read_struct failed");
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  try {
    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const png_byte color = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);
    if (color != PNG_COLOR_TYPE_GRAY) {
      throw FormatError("only grayscale PNG is supported: " + path);
    }
    if (depth == 16) {
      throw FormatError("16-bit PNG is not supported: " + path);
    }
    if (depth < 8) {
      png_set_expand_gray_1_2_4_to_8(png);
    }
    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    GrayImage img(width, height);
    std::vector<unsigned char> row(png_get_rowbytes(png, info));
    for (int r = 0; r < height; ++r) {
      png_read_row(png, row.data(), nullptr);
      for (int c = 0; c < width; ++c) {
        img.at(r, c) = static_cast<double>(row[c]);
      }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
  } catch (...) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw;
  }
}

void write_png(const GrayImage& img, const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) {
    throw IoError("cannot open " + path + " for writing");
  }
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            png_error_fn, png_warn_fn);
  if (!png) {
    throw IoError("png_create_write_struct failed");
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  try {
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<unsigned char> row(static_cast<std::size_t>(img.width));
    for (int r = 0; r < img.height; ++r) {
      for (int c = 0; c < img.width; ++c) {
        row[c] = quantize(img.at(r, c));
      }
      png_write_row(png, row.data());
    }
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
}

GrayImage read_image(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) {
    throw IoError("cannot open " + path);
  }
  unsigned char head[8] = {0};
  probe.read(reinterpret_cast<char*>(head), 8);
  probe.close();
  static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G',
                                           '\r', '\n', 0x1a, '\n'};
  if (std::memcmp(head, png_sig, 8) == 0) {
    return read_png(path);
  }
  if (head[0] == 'P') {
    return read_pgm(path);
  }
  throw FormatError("unrecognized image format: " + path);
}

void write_image(const GrayImage& img, const std::string& path) {
  const std::string ext = lower_ext(path);
  if (ext == "pgm") {
    write_pgm(img, path);
  } else if (ext == "png") {
    write_png(img, path);
  } else {
    throw FormatError("unsupported output extension ." + ext + " in " + path);
  }
}

} // namespace gsrnls
