#include <cmath>
#include <numbers>
#include <vector>

#include "encoders.hpp"

namespace hmdiris {

IrisCode encode_dct(const NormalizedIris& iris, const IrisMask& mask, const DctParams& params) {
  detail::check_pair(iris, mask);
  EncoderParams all;
  all.dct = params;
  const std::size_t angular = iris.angular_size();
  const auto [stacks, extent] = code_shape(Encoder::DCT, all, angular, iris.radial_size());
  const std::size_t stride = detail::dct_stride(params);
  const std::size_t positions = angular / stride;
  const std::size_t pw = params.patch_width;
  const std::size_t ph = params.patch_height;
  const std::size_t kept = params.coeffs_kept;

  // Raised-cosine window and DCT-II basis rows 1..kept (DC skipped).
  std::vector<double> window(pw);
  for (std::size_t n = 0; n < pw; ++n) {
    window[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (static_cast<double>(n) + 0.5) /
                                     static_cast<double>(pw));
  }
  std::vector<double> basis(kept * pw);
  for (std::size_t k = 0; k < kept; ++k) {
    for (std::size_t n = 0; n < pw; ++n) {
      basis[k * pw + n] = window[n] * std::cos(std::numbers::pi * (static_cast<double>(n) + 0.5) *
                                               static_cast<double>(k + 1) /
                                               static_cast<double>(pw));
    }
  }

  IrisCode code(Encoder::DCT, stacks, extent);
  std::vector<double> column_mean(angular);
  std::vector<std::size_t> column_valid(angular);
  std::vector<double> coeffs(positions * kept);
  std::vector<std::uint8_t> patch_valid(positions);
  const double inv_rows = 1.0 / static_cast<double>(ph);

  for (std::size_t t = 0; t < stacks; ++t) {
    std::fill(column_mean.begin(), column_mean.end(), 0.0);
    std::fill(column_valid.begin(), column_valid.end(), 0);
    for (std::size_t r = t * ph; r < (t + 1) * ph; ++r) {
      const auto tex = iris.texture.row(r);
      const auto m = mask.bits.row(r);
      for (std::size_t i = 0; i < angular; ++i) {
        column_mean[i] += tex[i];
        column_valid[i] += m[i] != 0 ? 1 : 0;
      }
    }
    for (auto& v : column_mean) v *= inv_rows;

    for (std::size_t p = 0; p < positions; ++p) {
      std::size_t valid = 0;
      for (std::size_t n = 0; n < pw; ++n) valid += column_valid[(p * stride + n) % angular];
      patch_valid[p] = 2 * valid >= pw * ph ? 1 : 0;
      for (std::size_t k = 0; k < kept; ++k) {
        double acc = 0.0;
        for (std::size_t n = 0; n < pw; ++n) {
          acc += basis[k * pw + n] * column_mean[(p * stride + n) % angular];
        }
        coeffs[p * kept + k] = acc;
      }
    }

    for (std::size_t p = 0; p < positions; ++p) {
      const std::size_t q = (p + 1) % positions;
      const bool valid = patch_valid[p] && patch_valid[q];
      for (std::size_t k = 0; k < kept; ++k) {
        const double diff = coeffs[p * kept + k] - coeffs[q * kept + k];
        code.set_code_bit(t, p * kept + k, diff > 0.0);
        code.set_mask_bit(t, p * kept + k, valid);
      }
    }
  }
  return code;
}

}  // namespace hmdiris
