#include "hmdiris/png_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>

#include "hmdiris/error.hpp"

namespace hmdiris {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) {
    if (mode[0] == 'r') throw Error(ErrorCode::FileMissing, path.string());
    throw Error(ErrorCode::Io, "cannot open for writing: " + path.string());
  }
  return f;
}

enum class ReadMode { Gray8, RawChannel };

struct RawPng {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int color_type = 0;
  int bit_depth = 0;
  std::vector<std::uint8_t> pixels;
};

// Returns an empty string on success, otherwise a description. Every object
// with a destructor lives in the caller so the longjmp path skips none.
std::string read_png_c(std::FILE* fp, ReadMode mode, RawPng& out) {
  png_byte sig[8];
  if (std::fread(sig, 1, 8, fp) != 8 || png_sig_cmp(sig, 0, 8) != 0) return "not a PNG file";

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) return "png_create_read_struct failed";
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return "png_create_info_struct failed";
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return "corrupt PNG data";
  }
  png_init_io(png, fp);
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  out.width = png_get_image_width(png, info);
  out.height = png_get_image_height(png, info);
  out.color_type = png_get_color_type(png, info);
  out.bit_depth = png_get_bit_depth(png, info);

  if (mode == ReadMode::RawChannel) {
    if (out.color_type != PNG_COLOR_TYPE_GRAY || out.bit_depth > 8) {
      png_destroy_read_struct(&png, &info, nullptr);
      return "expected a single-channel PNG with bit depth <= 8";
    }
    if (out.bit_depth < 8) png_set_packing(png);
  } else {
    if (out.bit_depth == 16) png_set_strip_16(png);
    if (out.color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (out.color_type == PNG_COLOR_TYPE_GRAY && out.bit_depth < 8)
      png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
    if (out.color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (out.color_type == PNG_COLOR_TYPE_RGB || out.color_type == PNG_COLOR_TYPE_RGB_ALPHA ||
        out.color_type == PNG_COLOR_TYPE_PALETTE)
      png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  }
  png_read_update_info(png, info);
  if (png_get_rowbytes(png, info) != out.width) {
    png_destroy_read_struct(&png, &info, nullptr);
    return "unsupported PNG layout";
  }

  out.pixels.resize(static_cast<std::size_t>(out.width) * out.height);
  for (png_uint_32 y = 0; y < out.height; ++y) {
    png_read_row(png, out.pixels.data() + static_cast<std::size_t>(y) * out.width, nullptr);
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return {};
}

std::string write_png_c(std::FILE* fp, const GrayImage& image, int bit_depth, int level,
                        std::vector<std::uint8_t>& row_buf) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) return "png_create_write_struct failed";
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return "png_create_info_struct failed";
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return "PNG encoding failed";
  }
  png_init_io(png, fp);
  png_set_compression_level(png, level);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()),
               static_cast<png_uint_32>(image.height()), bit_depth, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t y = 0; y < image.height(); ++y) {
    const auto src = image.row(y);
    if (bit_depth == 8) {
      std::copy(src.begin(), src.end(), row_buf.begin());
    } else {
      std::fill(row_buf.begin(), row_buf.end(), 0);
      for (std::size_t x = 0; x < src.size(); ++x) {
        if (src[x]) row_buf[x / 8] |= static_cast<std::uint8_t>(0x80u >> (x % 8));
      }
    }
    png_write_row(png, row_buf.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return {};
}

GrayImage read_impl(const std::filesystem::path& path, ReadMode mode) {
  auto fp = open_file(path, "rb");
  RawPng raw;
  if (auto err = read_png_c(fp.get(), mode, raw); !err.empty()) {
    throw Error(ErrorCode::ImageFormat, path.string() + ": " + err);
  }
  GrayImage image(raw.width, raw.height);
  std::copy(raw.pixels.begin(), raw.pixels.end(), image.pixels().begin());
  return image;
}

void write_impl(const std::filesystem::path& path, const GrayImage& image, int bit_depth,
                int level) {
  if (image.empty()) throw Error(ErrorCode::Io, "refusing to write empty image " + path.string());
  auto fp = open_file(path, "wb");
  std::vector<std::uint8_t> row_buf(bit_depth == 8 ? image.width() : (image.width() + 7) / 8);
  if (auto err = write_png_c(fp.get(), image, bit_depth, level, row_buf); !err.empty()) {
    throw Error(ErrorCode::Io, path.string() + ": " + err);
  }
}

}  // namespace

GrayImage read_png_gray8(const std::filesystem::path& path) {
  return read_impl(path, ReadMode::Gray8);
}

GrayImage read_png_raw_channel(const std::filesystem::path& path) {
  return read_impl(path, ReadMode::RawChannel);
}

void write_png_gray8(const std::filesystem::path& path, const GrayImage& image,
                     int compression_level) {
  write_impl(path, image, 8, compression_level);
}

void write_png_bits(const std::filesystem::path& path, const GrayImage& bits,
                    int compression_level) {
  write_impl(path, bits, 1, compression_level);
}

}  // namespace hmdiris
