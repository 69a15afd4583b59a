#pragma once

#include <cstdint>

#include "hmdiris/image.hpp"
#include "hmdiris/mask_ingest.hpp"

namespace hmdiris {

inline constexpr std::size_t kDefaultAngularSize = 512;
inline constexpr std::size_t kDefaultRadialSize = 64;

/// Unrolled iris: column = angle, row = radius (row 0 at the pupil).
struct NormalizedIris {
  Grid<float> texture;

  std::size_t angular_size() const noexcept { return texture.width(); }
  std::size_t radial_size() const noexcept { return texture.height(); }
};

/// 1 where the sample came from an in-bounds iris-labelled pixel.
struct IrisMask {
  GrayImage bits;

  std::size_t angular_size() const noexcept { return bits.width(); }
  std::size_t radial_size() const noexcept { return bits.height(); }
};

struct QualityScore {
  double imr = 0.0;
};

struct UnrolledIris {
  NormalizedIris iris;
  IrisMask mask;
};

/// Rubber-sheet unrolling around the pupil centre. Angle 0 points along +x
/// and increases counter-clockwise as seen on screen (towards -y in image
/// rows). Radius runs linearly from the pupil circle (row 0) to the limbus
/// (last row). Intensity is bilinear, labels nearest-neighbour.
UnrolledIris unroll(const GrayImage& image, const LabelMap& labels, const EyeGeometry& geometry,
                    std::size_t angular_size = kDefaultAngularSize,
                    std::size_t radial_size = kDefaultRadialSize);

inline UnrolledIris unroll(const EyeCapture& capture, const EyeGeometry& geometry,
                           std::size_t angular_size = kDefaultAngularSize,
                           std::size_t radial_size = kDefaultRadialSize) {
  return unroll(capture.image, capture.labels, geometry, angular_size, radial_size);
}

QualityScore compute_imr(const IrisMask& mask);

/// Texture rounded and clamped to 8 bits, for export.
GrayImage to_gray8(const NormalizedIris& iris);
NormalizedIris from_gray8(const GrayImage& image);

}  // namespace hmdiris
