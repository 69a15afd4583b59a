#include "hmdiris/normalization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hmdiris/error.hpp"

namespace hmdiris {

UnrolledIris unroll(const GrayImage& image, const LabelMap& labels, const EyeGeometry& geometry,
                    std::size_t angular_size, std::size_t radial_size) {
  if (angular_size == 0 || radial_size == 0) {
    throw Error(ErrorCode::ParamMismatch, "normalized size must be positive");
  }
  if (!(geometry.pupil_radius < geometry.iris_radius)) {
    throw Error(ErrorCode::DegenerateGeometry, "pupil radius must be below iris radius");
  }
  if (!image.same_shape(labels) || image.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "image and labels must share a non-empty shape");
  }

  const double max_x = static_cast<double>(image.width() - 1);
  const double max_y = static_cast<double>(image.height() - 1);

  std::vector<double> cos_t(angular_size);
  std::vector<double> sin_t(angular_size);
  for (std::size_t i = 0; i < angular_size; ++i) {
    const double theta =
        2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(angular_size);
    cos_t[i] = std::cos(theta);
    sin_t[i] = std::sin(theta);
  }

  UnrolledIris out{{Grid<float>(angular_size, radial_size)},
                   {GrayImage(angular_size, radial_size, 0)}};
  const double span = geometry.iris_radius - geometry.pupil_radius;
  for (std::size_t j = 0; j < radial_size; ++j) {
    const double r =
        radial_size == 1
            ? geometry.pupil_radius
            : geometry.pupil_radius +
                  span * static_cast<double>(j) / static_cast<double>(radial_size - 1);
    auto tex_row = out.iris.texture.row(j);
    auto mask_row = out.mask.bits.row(j);
    for (std::size_t i = 0; i < angular_size; ++i) {
      const double x = geometry.pupil_center.x + r * cos_t[i];
      const double y = geometry.pupil_center.y - r * sin_t[i];
      const bool inside = x >= 0.0 && y >= 0.0 && x <= max_x && y <= max_y;

      const double cx = std::clamp(x, 0.0, max_x);
      const double cy = std::clamp(y, 0.0, max_y);
      const auto x0 = static_cast<std::size_t>(std::floor(cx));
      const auto y0 = static_cast<std::size_t>(std::floor(cy));
      const std::size_t x1 = std::min(x0 + 1, image.width() - 1);
      const std::size_t y1 = std::min(y0 + 1, image.height() - 1);
      const double fx = cx - static_cast<double>(x0);
      const double fy = cy - static_cast<double>(y0);
      const double top = (1.0 - fx) * image(x0, y0) + fx * image(x1, y0);
      const double bottom = (1.0 - fx) * image(x0, y1) + fx * image(x1, y1);
      tex_row[i] = static_cast<float>((1.0 - fy) * top + fy * bottom);

      if (inside) {
        const auto nx = static_cast<std::size_t>(std::lround(cx));
        const auto ny = static_cast<std::size_t>(std::lround(cy));
        mask_row[i] = labels(nx, ny) == Label::Iris ? 1 : 0;
      }
    }
  }
  return out;
}

QualityScore compute_imr(const IrisMask& mask) {
  if (mask.bits.empty()) return {0.0};
  const auto px = mask.bits.pixels();
  const auto ones = static_cast<std::size_t>(
      std::count_if(px.begin(), px.end(), [](std::uint8_t v) { return v != 0; }));
  return {static_cast<double>(ones) / static_cast<double>(px.size())};
}

GrayImage to_gray8(const NormalizedIris& iris) {
  GrayImage out(iris.angular_size(), iris.radial_size());
  const auto src = iris.texture.pixels();
  auto dst = out.pixels();
  for (std::size_t k = 0; k < src.size(); ++k) {
    dst[k] = static_cast<std::uint8_t>(std::clamp(std::lround(src[k]), 0L, 255L));
  }
  return out;
}

NormalizedIris from_gray8(const GrayImage& image) {
  NormalizedIris iris{Grid<float>(image.width(), image.height())};
  std::copy(image.pixels().begin(), image.pixels().end(), iris.texture.pixels().begin());
  return iris;
}

}  // namespace hmdiris
