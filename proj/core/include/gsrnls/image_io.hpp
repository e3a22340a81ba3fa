#pragma once

#include <string>

#include "gsrnls/image.hpp"

namespace gsrnls {

/// Reads a binary PGM (P5, maxval 255) or an 8-bit grayscale PNG.
/// The format is detected from the file's magic bytes.
///
/// Throws IoError when the file cannot be opened and FormatError for
/// anything the reader does not support (ASCII PGM, 16-bit or color PNG,
/// malformed headers, truncated rasters).
GrayImage read_image(const std::string& path);

/// Writes the image as PGM or PNG depending on the path's extension
/// (".pgm" / ".png", case-insensitive). Pixels are clamped to [0, 255]
/// and rounded to the nearest integer.
void write_image(const GrayImage& img, const std::string& path);

GrayImage read_pgm(const std::string& path);
void write_pgm(const GrayImage& img, const std::string& path);

GrayImage read_png(const std::string& path);
void write_png(const GrayImage& img, const std::string& path);

} // namespace gsrnls
