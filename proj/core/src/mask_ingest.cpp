#include "hmdiris/mask_ingest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "convex_hull.hpp"
#include "hmdiris/error.hpp"
#include "hmdiris/png_io.hpp"

namespace hmdiris {
namespace {

using detail::IPoint;

// Row extremes of the largest 8-connected component of `cls`; the convex
// hull of these points equals the hull of the whole component.
std::vector<IPoint> largest_component_extremes(const LabelMap& labels, Label cls) {
  const std::size_t w = labels.width();
  const std::size_t h = labels.height();
  std::vector<std::int32_t> comp(w * h, -1);
  std::vector<std::size_t> stack;

  std::int32_t best_id = -1;
  std::size_t best_size = 0;
  std::int32_t next_id = 0;

  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t seed = y * w + x;
      if (labels(x, y) != cls || comp[seed] >= 0) continue;
      const std::int32_t id = next_id++;
      std::size_t size = 0;
      comp[seed] = id;
      stack.push_back(seed);
      while (!stack.empty()) {
        const std::size_t p = stack.back();
        stack.pop_back();
        ++size;
        const std::size_t px = p % w;
        const std::size_t py = p / w;
        const std::size_t x0 = px > 0 ? px - 1 : 0;
        const std::size_t x1 = std::min(px + 1, w - 1);
        const std::size_t y0 = py > 0 ? py - 1 : 0;
        const std::size_t y1 = std::min(py + 1, h - 1);
        for (std::size_t ny = y0; ny <= y1; ++ny) {
          for (std::size_t nx = x0; nx <= x1; ++nx) {
            const std::size_t q = ny * w + nx;
            if (comp[q] < 0 && labels(nx, ny) == cls) {
              comp[q] = id;
              stack.push_back(q);
            }
          }
        }
      }
      // Components are discovered in row-major order of their first pixel,
      // so strict comparison keeps the earliest on ties.
      if (size > best_size) {
        best_size = size;
        best_id = id;
      }
    }
  }

  std::vector<IPoint> extremes;
  if (best_id < 0) return extremes;
  for (std::size_t y = 0; y < h; ++y) {
    std::int64_t lo = -1;
    std::int64_t hi = -1;
    for (std::size_t x = 0; x < w; ++x) {
      if (comp[y * w + x] == best_id) {
        if (lo < 0) lo = static_cast<std::int64_t>(x);
        hi = static_cast<std::int64_t>(x);
      }
    }
    if (lo >= 0) {
      extremes.push_back({lo, static_cast<std::int64_t>(y)});
      if (hi != lo) extremes.push_back({hi, static_cast<std::int64_t>(y)});
    }
  }
  return extremes;
}

void paint_hull(LabelMap& out, const std::vector<IPoint>& points, Label cls) {
  const auto hull = detail::convex_hull(points);
  for (const auto& span : detail::rasterize_hull(hull)) {
    auto row = out.row(static_cast<std::size_t>(span.y));
    for (std::int64_t x = span.x0; x <= span.x1; ++x) row[static_cast<std::size_t>(x)] = cls;
  }
}

LabelMap refine_pass(const LabelMap& labels) {
  LabelMap out(labels.width(), labels.height(), Label::Background);
  for (Label cls : {Label::Sclera, Label::Iris, Label::Pupil}) {
    paint_hull(out, largest_component_extremes(labels, cls), cls);
  }
  return out;
}

}  // namespace

LabelMap labels_from_raw(const GrayImage& raw) {
  LabelMap labels(raw.width(), raw.height());
  auto dst = labels.pixels();
  const auto src = raw.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i] > 3) {
      throw Error(ErrorCode::IllegalLabelValue,
                  "label value " + std::to_string(src[i]) + " at (" +
                      std::to_string(i % raw.width()) + "," + std::to_string(i / raw.width()) +
                      ")");
    }
    dst[i] = static_cast<Label>(src[i]);
  }
  return labels;
}

EyeCapture load_capture(const std::filesystem::path& image_path,
                        const std::filesystem::path& label_path, std::string identity_id,
                        std::size_t frame_index) {
  for (const auto* p : {&image_path, &label_path}) {
    if (!std::filesystem::is_regular_file(*p)) throw Error(ErrorCode::FileMissing, p->string());
  }
  EyeCapture capture;
  capture.identity_id = std::move(identity_id);
  capture.frame_index = frame_index;
  capture.image = read_png_gray8(image_path);
  const GrayImage raw = read_png_raw_channel(label_path);
  if (!raw.same_shape(capture.image)) {
    throw Error(ErrorCode::DimensionMismatch,
                "image " + std::to_string(capture.image.width()) + "x" +
                    std::to_string(capture.image.height()) + " vs labels " +
                    std::to_string(raw.width()) + "x" + std::to_string(raw.height()));
  }
  capture.labels = labels_from_raw(raw);
  return capture;
}

LabelMap refine_labels(const LabelMap& labels) {
  // Hulls only shrink from one pass to the next, so this terminates; the
  // bound is a guard against a logic error, not a tuning knob.
  LabelMap current = refine_pass(labels);
  for (int i = 0; i < 64; ++i) {
    LabelMap next = refine_pass(current);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

EyeGeometry fit_eye_geometry(const LabelMap& labels) {
  const std::size_t w = labels.width();
  const std::size_t h = labels.height();

  std::uint64_t sum_x = 0;
  std::uint64_t sum_y = 0;
  std::uint64_t pupil_count = 0;
  std::uint64_t iris_count = 0;
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const Label l = labels(x, y);
      if (l == Label::Pupil) {
        sum_x += x;
        sum_y += y;
        ++pupil_count;
      } else if (l == Label::Iris) {
        ++iris_count;
      }
    }
  }
  // A closed eye has neither class and reports NoIris.
  if (iris_count == 0) throw Error(ErrorCode::NoIris, "no iris-labelled pixels");
  if (pupil_count == 0) throw Error(ErrorCode::NoPupil, "no pupil-labelled pixels");

  EyeGeometry g;
  g.pupil_center = {static_cast<double>(sum_x) / static_cast<double>(pupil_count),
                    static_cast<double>(sum_y) / static_cast<double>(pupil_count)};

  auto is_pupil = [&](std::ptrdiff_t x, std::ptrdiff_t y) {
    return x >= 0 && y >= 0 && x < static_cast<std::ptrdiff_t>(w) &&
           y < static_cast<std::ptrdiff_t>(h) &&
           labels(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) == Label::Pupil;
  };

  double min_boundary_sq = std::numeric_limits<double>::infinity();
  double max_iris_sq = 0.0;
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const Label l = labels(x, y);
      const double dx = static_cast<double>(x) - g.pupil_center.x;
      const double dy = static_cast<double>(y) - g.pupil_center.y;
      const double d2 = dx * dx + dy * dy;
      if (l == Label::Iris) {
        max_iris_sq = std::max(max_iris_sq, d2);
      } else if (l == Label::Pupil) {
        const auto sx = static_cast<std::ptrdiff_t>(x);
        const auto sy = static_cast<std::ptrdiff_t>(y);
        const bool boundary = !is_pupil(sx - 1, sy) || !is_pupil(sx + 1, sy) ||
                              !is_pupil(sx, sy - 1) || !is_pupil(sx, sy + 1);
        if (boundary) min_boundary_sq = std::min(min_boundary_sq, d2);
      }
    }
  }
  g.pupil_radius = std::max(0.5, std::sqrt(min_boundary_sq));
  g.iris_radius = std::sqrt(max_iris_sq);
  if (g.iris_radius <= g.pupil_radius) {
    throw Error(ErrorCode::DegenerateGeometry,
                "iris radius " + std::to_string(g.iris_radius) + " <= pupil radius " +
                    std::to_string(g.pupil_radius));
  }
  return g;
}

CoarseCrop coarse_crop(const EyeCapture& capture) {
  const LabelMap& labels = capture.labels;
  CoarseBox box{std::numeric_limits<std::size_t>::max(), std::numeric_limits<std::size_t>::max(),
                0, 0};
  bool any = false;
  for (std::size_t y = 0; y < labels.height(); ++y) {
    for (std::size_t x = 0; x < labels.width(); ++x) {
      const Label l = labels(x, y);
      if (l != Label::Iris && l != Label::Pupil) continue;
      any = true;
      box.min_x = std::min(box.min_x, x);
      box.min_y = std::min(box.min_y, y);
      box.max_x = std::max(box.max_x, x);
      box.max_y = std::max(box.max_y, y);
    }
  }
  if (!any) throw Error(ErrorCode::NoIris, "no iris or pupil pixels to crop");

  CoarseCrop crop{box, GrayImage(box.width(), box.height())};
  for (std::size_t y = 0; y < box.height(); ++y) {
    const auto src = capture.image.row(box.min_y + y);
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(box.min_x), box.width(),
                crop.image.row(y).begin());
  }
  return crop;
}

}  // namespace hmdiris
