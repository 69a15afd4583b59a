#pragma once

#include <filesystem>

#include "hmdiris/image.hpp"

namespace hmdiris {

/// Reads any PNG as 8-bit grayscale. Colour images are converted with the
/// libpng default luma weights; low bit depths are rescaled to 0..255.
GrayImage read_png_gray8(const std::filesystem::path& path);

/// Reads a single-channel PNG keeping raw sample values (no rescaling of
/// 1/2/4-bit data). Colour, palette, alpha and 16-bit files are rejected
/// with ErrorCode::ImageFormat.
GrayImage read_png_raw_channel(const std::filesystem::path& path);

void write_png_gray8(const std::filesystem::path& path, const GrayImage& image,
                     int compression_level = 6);

/// Writes a 1-bit PNG; any nonzero pixel becomes 1.
void write_png_bits(const std::filesystem::path& path, const GrayImage& bits,
                    int compression_level = 6);

}  // namespace hmdiris
