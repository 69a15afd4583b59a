#pragma once

#include <cstdint>
#include <vector>

namespace hmdiris::detail {

struct IPoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator==(const IPoint&, const IPoint&) = default;
};

/// Andrew's monotone chain. Returns the hull in counter-clockwise order
/// (algebraic orientation) without collinear vertices. A single point or a
/// segment comes back as one or two vertices.
std::vector<IPoint> convex_hull(std::vector<IPoint> points);

struct RowSpan {
  std::int64_t y;
  std::int64_t x0;
  std::int64_t x1;  // inclusive
};

/// Lattice points inside or on the hull, one span per non-empty row.
std::vector<RowSpan> rasterize_hull(const std::vector<IPoint>& hull);

}  // namespace hmdiris::detail
