#include "hmdiris/iriscode.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "encoders.hpp"
#include "hmdiris/error.hpp"

namespace hmdiris {

std::string_view encoder_name(Encoder e) noexcept {
  switch (e) {
    case Encoder::LogGabor: return "LG";
    case Encoder::DCT: return "DCT";
    case Encoder::CSBCA: return "CSBCA";
  }
  return "?";
}

std::optional<Encoder> parse_encoder(std::string_view name) noexcept {
  if (name == "LG" || name == "LogGabor" || name == "lg") return Encoder::LogGabor;
  if (name == "DCT" || name == "dct") return Encoder::DCT;
  if (name == "CSBCA" || name == "csbca") return Encoder::CSBCA;
  return std::nullopt;
}

IrisCode::IrisCode(Encoder encoder, std::size_t rows, std::size_t angular_extent)
    : encoder_(encoder),
      rows_(rows),
      extent_(angular_extent),
      words_per_row_((angular_extent + 63) / 64),
      code_(rows * words_per_row_, 0),
      mask_(rows * words_per_row_, 0) {
  if (rows == 0 || angular_extent == 0) {
    throw Error(ErrorCode::ParamMismatch, "iris code must have at least one bit");
  }
}

std::size_t IrisCode::mask_popcount() const noexcept {
  return std::accumulate(mask_.begin(), mask_.end(), std::size_t{0},
                         [](std::size_t acc, std::uint64_t w) {
                           return acc + static_cast<std::size_t>(std::popcount(w));
                         });
}

namespace detail {

void check_pair(const NormalizedIris& iris, const IrisMask& mask) {
  if (iris.texture.empty() || !iris.texture.same_shape(mask.bits)) {
    throw Error(ErrorCode::ParamMismatch, "texture and mask must share a non-empty shape");
  }
}

std::size_t dct_stride(const DctParams& p) {
  if (!(p.overlap >= 0.0 && p.overlap < 1.0)) {
    throw Error(ErrorCode::ParamMismatch, "DCT overlap must lie in [0,1)");
  }
  const double s = static_cast<double>(p.patch_width) * (1.0 - p.overlap);
  const double r = std::round(s);
  if (r < 1.0 || std::abs(s - r) > 1e-9) {
    throw Error(ErrorCode::ParamMismatch,
                "DCT patch stride " + std::to_string(s) + " is not a positive integer");
  }
  return static_cast<std::size_t>(r);
}

}  // namespace detail

std::pair<std::size_t, std::size_t> code_shape(Encoder encoder, const EncoderParams& params,
                                               std::size_t angular_size,
                                               std::size_t radial_size) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::ParamMismatch, what); };
  switch (encoder) {
    case Encoder::LogGabor: {
      const auto& p = params.log_gabor;
      if (p.radial_bands == 0 || p.radial_bands > radial_size)
        fail("radial_bands must lie in [1, radial size]");
      if (angular_size < 64) fail("Log-Gabor needs an angular size of at least 64");
      if (!(p.center_wavelength >= 2.0)) fail("center_wavelength must be >= 2 px");
      if (!(p.sigma_over_f > 0.0 && p.sigma_over_f < 1.0)) fail("sigma_over_f must lie in (0,1)");
      return {p.radial_bands, 2 * angular_size};
    }
    case Encoder::DCT: {
      const auto& p = params.dct;
      if (p.patch_width < 2 || p.patch_height == 0) fail("DCT patch too small");
      if (p.patch_width > angular_size) fail("DCT patch wider than the texture");
      if (radial_size % p.patch_height != 0) fail("DCT patch height must divide the radial size");
      if (p.coeffs_kept == 0 || p.coeffs_kept >= p.patch_width)
        fail("coeffs_kept must lie in [1, patch_width - 1]");
      const std::size_t stride = detail::dct_stride(p);
      if (angular_size % stride != 0) fail("DCT patch stride must divide the angular size");
      return {radial_size / p.patch_height, (angular_size / stride) * p.coeffs_kept};
    }
    case Encoder::CSBCA: {
      const auto& p = params.csbca;
      if (p.cell_width == 0 || p.cell_height == 0 || p.group_size == 0)
        fail("CSBCA cell and group sizes must be positive");
      if (angular_size % p.cell_width != 0 || radial_size % p.cell_height != 0)
        fail("CSBCA cells must tile the normalized texture");
      return {radial_size / p.cell_height, 2 * (angular_size / p.cell_width)};
    }
  }
  fail("unknown encoder");
  return {};
}

ShiftStride shift_stride(Encoder encoder, const EncoderParams& params, std::size_t angular_size) {
  switch (encoder) {
    case Encoder::LogGabor:
      return {1, 2, true};
    case Encoder::DCT:
      return {detail::dct_stride(params.dct), params.dct.coeffs_kept, true};
    case Encoder::CSBCA: {
      const auto& p = params.csbca;
      const std::size_t cells = p.cell_width ? angular_size / p.cell_width : 0;
      return {p.cell_width * p.group_size, 2 * p.group_size,
              p.group_size != 0 && cells % p.group_size == 0};
    }
  }
  return {};
}

IrisCode encode(Encoder encoder, const NormalizedIris& iris, const IrisMask& mask,
                const EncoderParams& params) {
  switch (encoder) {
    case Encoder::LogGabor: return encode_log_gabor(iris, mask, params.log_gabor);
    case Encoder::DCT: return encode_dct(iris, mask, params.dct);
    case Encoder::CSBCA: return encode_csbca(iris, mask, params.csbca);
  }
  throw Error(ErrorCode::ParamMismatch, "unknown encoder");
}

}  // namespace hmdiris
