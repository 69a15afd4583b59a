#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hmdiris/normalization.hpp"

namespace hmdiris {

enum class Encoder : std::uint8_t { LogGabor = 1, DCT = 2, CSBCA = 3 };

std::string_view encoder_name(Encoder e) noexcept;
std::optional<Encoder> parse_encoder(std::string_view name) noexcept;

/// Bit-packed template. Bits are laid out as `rows` angular rows of
/// `angular_extent` columns each; a column shift rotates every row.
/// Each row is stored in its own run of 64-bit words (LSB first, unused
/// tail bits zero), so the packed rows can be rotated independently.
class IrisCode {
 public:
  IrisCode() = default;
  IrisCode(Encoder encoder, std::size_t rows, std::size_t angular_extent);

  Encoder encoder() const noexcept { return encoder_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t angular_extent() const noexcept { return extent_; }
  std::size_t bit_count() const noexcept { return rows_ * extent_; }
  std::size_t words_per_row() const noexcept { return words_per_row_; }

  bool code_bit(std::size_t row, std::size_t col) const noexcept {
    return get(code_, row, col);
  }
  bool mask_bit(std::size_t row, std::size_t col) const noexcept {
    return get(mask_, row, col);
  }
  void set_code_bit(std::size_t row, std::size_t col, bool v) noexcept { set(code_, row, col, v); }
  void set_mask_bit(std::size_t row, std::size_t col, bool v) noexcept { set(mask_, row, col, v); }

  // Flat index = row * angular_extent + col.
  bool code_bit(std::size_t i) const noexcept { return code_bit(i / extent_, i % extent_); }
  bool mask_bit(std::size_t i) const noexcept { return mask_bit(i / extent_, i % extent_); }
  void set_code_bit(std::size_t i, bool v) noexcept { set_code_bit(i / extent_, i % extent_, v); }
  void set_mask_bit(std::size_t i, bool v) noexcept { set_mask_bit(i / extent_, i % extent_, v); }

  std::span<const std::uint64_t> code_row(std::size_t row) const noexcept {
    return {code_.data() + row * words_per_row_, words_per_row_};
  }
  std::span<const std::uint64_t> mask_row(std::size_t row) const noexcept {
    return {mask_.data() + row * words_per_row_, words_per_row_};
  }

  std::size_t mask_popcount() const noexcept;

  friend bool operator==(const IrisCode&, const IrisCode&) = default;

 private:
  bool get(const std::vector<std::uint64_t>& v, std::size_t row, std::size_t col) const noexcept {
    return (v[row * words_per_row_ + col / 64] >> (col % 64)) & 1u;
  }
  void set(std::vector<std::uint64_t>& v, std::size_t row, std::size_t col, bool b) noexcept {
    auto& w = v[row * words_per_row_ + col / 64];
    const std::uint64_t bit = std::uint64_t{1} << (col % 64);
    w = b ? (w | bit) : (w & ~bit);
  }

  Encoder encoder_ = Encoder::LogGabor;
  std::size_t rows_ = 0;
  std::size_t extent_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> code_;
  std::vector<std::uint64_t> mask_;
};

struct LogGaborParams {
  std::size_t radial_bands = 16;
  double center_wavelength = 18.0;  // pixels along the angular axis
  double sigma_over_f = 0.5;
  // Responses weaker than this fraction of the largest response an 8-bit
  // texture can produce are mask-invalid.
  double magnitude_floor = 1e-4;
};

struct DctParams {
  std::size_t patch_width = 16;  // angular
  std::size_t patch_height = 8;  // radial
  double overlap = 0.5;
  std::size_t coeffs_kept = 4;
};

struct CsbcaParams {
  std::size_t cell_width = 8;   // angular
  std::size_t cell_height = 4;  // radial
  std::size_t group_size = 5;
};

struct EncoderParams {
  LogGaborParams log_gabor;
  DctParams dct;
  CsbcaParams csbca;
};

/// Rotating the texture by `pixels` columns rotates the code by `columns`
/// bit columns. Exact for Log-Gabor and DCT; for CSBCA only when the cell
/// groups tile the angular axis (see `exact`).
struct ShiftStride {
  std::size_t pixels = 1;
  std::size_t columns = 1;
  bool exact = true;
};

ShiftStride shift_stride(Encoder encoder, const EncoderParams& params,
                         std::size_t angular_size = kDefaultAngularSize);

/// Code geometry (rows, angular_extent) for a normalized size; throws
/// ParamMismatch when the parameters do not fit the grid.
std::pair<std::size_t, std::size_t> code_shape(Encoder encoder, const EncoderParams& params,
                                               std::size_t angular_size,
                                               std::size_t radial_size);

IrisCode encode_log_gabor(const NormalizedIris& iris, const IrisMask& mask,
                          const LogGaborParams& params = {});
IrisCode encode_dct(const NormalizedIris& iris, const IrisMask& mask,
                    const DctParams& params = {});
IrisCode encode_csbca(const NormalizedIris& iris, const IrisMask& mask,
                      const CsbcaParams& params = {});

IrisCode encode(Encoder encoder, const NormalizedIris& iris, const IrisMask& mask,
                const EncoderParams& params = {});

}  // namespace hmdiris
