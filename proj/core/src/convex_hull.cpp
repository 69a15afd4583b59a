#include "convex_hull.hpp"

#include <algorithm>
#include <limits>

namespace hmdiris::detail {
namespace {

std::int64_t cross(const IPoint& o, const IPoint& a, const IPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace

std::vector<IPoint> convex_hull(std::vector<IPoint> points) {
  std::sort(points.begin(), points.end(), [](const IPoint& a, const IPoint& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() <= 2) return points;

  std::vector<IPoint> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const auto& p = points[i];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<RowSpan> rasterize_hull(const std::vector<IPoint>& hull) {
  std::vector<RowSpan> spans;
  if (hull.empty()) return spans;

  std::int64_t min_x = std::numeric_limits<std::int64_t>::max();
  std::int64_t max_x = std::numeric_limits<std::int64_t>::min();
  std::int64_t min_y = min_x;
  std::int64_t max_y = max_x;
  for (const auto& v : hull) {
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
  }
  if (hull.size() == 1) {
    spans.push_back({hull[0].y, hull[0].x, hull[0].x});
    return spans;
  }

  spans.reserve(static_cast<std::size_t>(max_y - min_y + 1));
  for (std::int64_t y = min_y; y <= max_y; ++y) {
    std::int64_t lo = min_x;
    std::int64_t hi = max_x;
    bool empty_row = false;
    for (std::size_t i = 0; i < hull.size() && !empty_row; ++i) {
      const IPoint& a = hull[i];
      const IPoint& b = hull[(i + 1) % hull.size()];
      const std::int64_t dx = b.x - a.x;
      const std::int64_t dy = b.y - a.y;
      const std::int64_t c = dx * (y - a.y);
      // inside iff dy * (x - a.x) <= c
      if (dy > 0) {
        hi = std::min(hi, a.x + floor_div(c, dy));
      } else if (dy < 0) {
        lo = std::max(lo, a.x + ceil_div(c, dy));
      } else if (c < 0) {
        empty_row = true;
      }
    }
    if (!empty_row && lo <= hi) spans.push_back({y, lo, hi});
  }
  return spans;
}

}  // namespace hmdiris::detail
