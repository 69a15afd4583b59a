#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "hmdiris/image.hpp"

namespace hmdiris {

enum class Label : std::uint8_t { Background = 0, Sclera = 1, Iris = 2, Pupil = 3 };

using LabelMap = Grid<Label>;

/// One eye image with its per-pixel segmentation.
struct EyeCapture {
  std::string identity_id;
  std::size_t frame_index = 0;
  GrayImage image;
  LabelMap labels;

  std::size_t width() const noexcept { return image.width(); }
  std::size_t height() const noexcept { return image.height(); }
};

struct Point2d {
  double x = 0.0;
  double y = 0.0;
};

/// Pupil and limbus circles sharing the pupil centroid.
struct EyeGeometry {
  Point2d pupil_center;
  double pupil_radius = 0.0;
  double iris_radius = 0.0;
};

/// Inclusive pixel bounds.
struct CoarseBox {
  std::size_t min_x = 0;
  std::size_t min_y = 0;
  std::size_t max_x = 0;
  std::size_t max_y = 0;

  std::size_t width() const noexcept { return max_x - min_x + 1; }
  std::size_t height() const noexcept { return max_y - min_y + 1; }
  friend bool operator==(const CoarseBox&, const CoarseBox&) = default;
};

/// Validates raw label values; throws IllegalLabelValue for anything above 3.
LabelMap labels_from_raw(const GrayImage& raw);

EyeCapture load_capture(const std::filesystem::path& image_path,
                        const std::filesystem::path& label_path, std::string identity_id,
                        std::size_t frame_index);

/// Keeps the largest 8-connected component of each foreground class and
/// replaces it with its filled convex hull. Hulls are painted sclera, iris,
/// pupil in that order, so inner structures win. The pass is repeated until
/// it reaches a fixpoint, which makes the result idempotent.
LabelMap refine_labels(const LabelMap& labels);

/// Pupil centroid, distance to the nearest pupil boundary pixel (floored at
/// half a pixel) and distance to the farthest iris pixel.
EyeGeometry fit_eye_geometry(const LabelMap& labels);

struct CoarseCrop {
  CoarseBox box;
  GrayImage image;
};

CoarseCrop coarse_crop(const EyeCapture& capture);

}  // namespace hmdiris
