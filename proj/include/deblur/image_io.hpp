#pragma once

#include <filesystem>

#include "deblur/image.hpp"

namespace deblur {

/// Reads an 8- or 16-bit grayscale PNG or a binary PGM (P5). The format is
/// detected from the file signature. Values are divided by the largest
/// representable sample and clamped into [0, 1].
ImageGrid read_image(const std::filesystem::path& path);

/// Writes an 8-bit grayscale PNG; values are clamped to [0, 1] and rounded.
void write_png(const std::filesystem::path& path, const ImageGrid& img);

/// Writes a binary PGM with maxval 255 or 65535.
void write_pgm(const std::filesystem::path& path, const ImageGrid& img, bool sixteen_bit = false);

} // namespace deblur
