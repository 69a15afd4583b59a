// Slow, independent reference implementations used to check the library.
// Everything here is written for clarity over speed and shares no code
// with the library beyond its public value types.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <random>
#include <vector>

#include "hmdiris/iriscode.hpp"
#include "hmdiris/mask_ingest.hpp"
#include "hmdiris/metrics.hpp"
#include "hmdiris/normalization.hpp"
#include "hmdiris/trustsim.hpp"

namespace oracle {

using hmdiris::IrisCode;

// ---------------------------------------------------------------- matcher

struct BitCounts {
  std::size_t differing = 0;
  std::size_t overlap = 0;
  int shift = 0;
};

/// Bit of b after rotating each row by `shift` columns: b[(col - shift) mod W].
inline std::size_t rotated_col(std::size_t col, int shift, std::size_t width) {
  const long long w = static_cast<long long>(width);
  return static_cast<std::size_t>(((static_cast<long long>(col) - shift) % w + w) % w);
}

inline BitCounts count_bits(const IrisCode& a, const IrisCode& b, int shift) {
  BitCounts c;
  c.shift = shift;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t col = 0; col < a.angular_extent(); ++col) {
      const std::size_t bc = rotated_col(col, shift, b.angular_extent());
      if (a.mask_bit(r, col) && b.mask_bit(r, bc)) {
        ++c.overlap;
        if (a.code_bit(r, col) != b.code_bit(r, bc)) ++c.differing;
      }
    }
  }
  return c;
}

inline std::optional<BitCounts> hamming(const IrisCode& a, const IrisCode& b,
                                        std::size_t min_overlap = 1) {
  const BitCounts c = count_bits(a, b, 0);
  if (c.overlap < std::max<std::size_t>(1, min_overlap)) return std::nullopt;
  return c;
}

/// Exhaustive over all shifts, then the documented tie rule: lowest
/// distance, then smallest |s|, then negative before positive.
inline std::optional<BitCounts> shifted_hamming(const IrisCode& a, const IrisCode& b,
                                                int max_shift, std::size_t min_overlap = 1) {
  std::vector<BitCounts> candidates;
  for (int s = -max_shift; s <= max_shift; ++s) {
    const BitCounts c = count_bits(a, b, s);
    if (c.overlap >= std::max<std::size_t>(1, min_overlap)) candidates.push_back(c);
  }
  if (candidates.empty()) return std::nullopt;
  auto better = [](const BitCounts& x, const BitCounts& y) {
    const auto lhs = static_cast<unsigned long long>(x.differing) * y.overlap;
    const auto rhs = static_cast<unsigned long long>(y.differing) * x.overlap;
    if (lhs != rhs) return lhs < rhs;
    if (std::abs(x.shift) != std::abs(y.shift)) return std::abs(x.shift) < std::abs(y.shift);
    return x.shift < y.shift;
  };
  return *std::min_element(candidates.begin(), candidates.end(), better);
}

inline IrisCode rotate(const IrisCode& code, int shift) {
  IrisCode out(code.encoder(), code.rows(), code.angular_extent());
  for (std::size_t r = 0; r < code.rows(); ++r)
    for (std::size_t col = 0; col < code.angular_extent(); ++col) {
      const std::size_t src = rotated_col(col, shift, code.angular_extent());
      out.set_code_bit(r, col, code.code_bit(r, src));
      out.set_mask_bit(r, col, code.mask_bit(r, src));
    }
  return out;
}

inline IrisCode random_code(std::mt19937_64& rng, std::size_t rows, std::size_t extent,
                            double mask_density, hmdiris::Encoder enc = hmdiris::Encoder::LogGabor) {
  IrisCode c(enc, rows, extent);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution valid(mask_density);
  for (std::size_t i = 0; i < c.bit_count(); ++i) {
    c.set_code_bit(i, coin(rng));
    c.set_mask_bit(i, valid(rng));
  }
  return c;
}

// ---------------------------------------------------------------- metrics

struct SweepPoint {
  double threshold;
  std::size_t impostor_accepted;
  std::size_t genuine_rejected;
};

/// Every candidate threshold: -inf, each observed score, +inf.
inline std::vector<SweepPoint> sweep(const hmdiris::ScoreSet& s) {
  std::vector<double> ts{-std::numeric_limits<double>::infinity()};
  ts.insert(ts.end(), s.genuine.begin(), s.genuine.end());
  ts.insert(ts.end(), s.impostor.begin(), s.impostor.end());
  ts.push_back(std::numeric_limits<double>::infinity());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<SweepPoint> out;
  for (double t : ts) {
    SweepPoint p{t, 0, 0};
    for (double v : s.impostor) p.impostor_accepted += v >= t ? 1 : 0;
    for (double v : s.genuine) p.genuine_rejected += v < t ? 1 : 0;
    out.push_back(p);
  }
  return out;
}

inline hmdiris::EerResult eer(const hmdiris::ScoreSet& s) {
  const auto pts = sweep(s);
  const double ni = static_cast<double>(s.impostor.size());
  const double ng = static_cast<double>(s.genuine.size());
  // Compare |fmr - fnmr| via integers scaled by ni * ng to avoid rounding.
  auto gap = [&](const SweepPoint& p) {
    const long long a = static_cast<long long>(p.impostor_accepted * s.genuine.size());
    const long long b = static_cast<long long>(p.genuine_rejected * s.impostor.size());
    return a > b ? a - b : b - a;
  };
  const SweepPoint* best = &pts.front();
  for (const auto& p : pts)
    if (gap(p) < gap(*best)) best = &p;
  return {(best->impostor_accepted / ni + best->genuine_rejected / ng) / 2.0, best->threshold};
}

inline double fmr10(const hmdiris::ScoreSet& s) {
  double best = 1.0;
  bool any = false;
  for (const auto& p : sweep(s)) {
    // fmr <= 0.1  <=>  10 * accepted <= n_impostor
    if (10 * p.impostor_accepted <= s.impostor.size()) {
      const double fnmr = static_cast<double>(p.genuine_rejected) / s.genuine.size();
      best = any ? std::min(best, fnmr) : fnmr;
      any = true;
    }
  }
  return best;
}

inline double mann_whitney_auc(const hmdiris::ScoreSet& s) {
  double wins = 0.0;
  for (double g : s.genuine)
    for (double i : s.impostor) wins += g > i ? 1.0 : (g == i ? 0.5 : 0.0);
  return wins / (static_cast<double>(s.genuine.size()) * s.impostor.size());
}

// ---------------------------------------------------------------- trust

/// Straight-line transcription of the penalty-and-reward rules.
inline std::vector<double> simulate_trust(const std::vector<hmdiris::TrustFrame>& frames,
                                          double T, double alpha, double imr_threshold) {
  std::vector<double> tv_out;
  double tv = T;
  for (const auto& f : frames) {
    if (f.imr < imr_threshold) {
      tv = tv - alpha;
      if (tv < -1.0) tv = -1.0;
    } else if (*f.cs >= T) {
      tv = tv + (*f.cs - T);
      if (tv > 1.0) tv = 1.0;
    } else {
      tv = tv - (T - *f.cs);
      if (tv < -1.0) tv = -1.0;
    }
    tv_out.push_back(tv);
  }
  return tv_out;
}

// ---------------------------------------------------------------- geometry

struct Pt {
  long long x, y;
};

inline long long cross(const Pt& o, const Pt& a, const Pt& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Jarvis march; returns hull vertices without collinear points.
inline std::vector<Pt> gift_wrap(std::vector<Pt> pts) {
  std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Pt& a, const Pt& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Pt> hull;
  std::size_t current = 0;  // leftmost-lowest point is on the hull
  do {
    hull.push_back(pts[current]);
    std::size_t next = (current + 1) % pts.size();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const long long c = cross(pts[current], pts[next], pts[i]);
      const auto d2 = [&](const Pt& p) {
        const long long dx = p.x - pts[current].x, dy = p.y - pts[current].y;
        return dx * dx + dy * dy;
      };
      // Take the most clockwise candidate; among collinear ones the farthest.
      if (c < 0 || (c == 0 && d2(pts[i]) > d2(pts[next]))) next = i;
    }
    current = next;
  } while (current != 0 && hull.size() <= pts.size());
  return hull;
}

/// Lattice point inside or on the (possibly degenerate) hull.
inline bool inside_hull(const std::vector<Pt>& hull, Pt p) {
  if (hull.empty()) return false;
  if (hull.size() == 1) return p.x == hull[0].x && p.y == hull[0].y;
  if (hull.size() == 2) {
    const Pt& a = hull[0];
    const Pt& b = hull[1];
    return cross(a, b, p) == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
  }
  bool all_pos = true, all_neg = true;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const long long c = cross(hull[i], hull[(i + 1) % hull.size()], p);
    all_pos &= c >= 0;
    all_neg &= c <= 0;
  }
  return all_pos || all_neg;
}

/// Largest 8-connected component by breadth-first search (earliest seed in
/// row-major order wins ties), as a list of pixels.
inline std::vector<Pt> largest_component(const hmdiris::LabelMap& labels, hmdiris::Label cls) {
  const long long w = static_cast<long long>(labels.width());
  const long long h = static_cast<long long>(labels.height());
  std::vector<char> seen(static_cast<std::size_t>(w * h), 0);
  std::vector<Pt> best;
  for (long long y = 0; y < h; ++y)
    for (long long x = 0; x < w; ++x) {
      if (seen[y * w + x] || labels(x, y) != cls) continue;
      std::vector<Pt> comp;
      std::queue<Pt> q;
      q.push({x, y});
      seen[y * w + x] = 1;
      while (!q.empty()) {
        const Pt p = q.front();
        q.pop();
        comp.push_back(p);
        for (long long dy = -1; dy <= 1; ++dy)
          for (long long dx = -1; dx <= 1; ++dx) {
            const long long nx = p.x + dx, ny = p.y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            if (seen[ny * w + nx] || labels(nx, ny) != cls) continue;
            seen[ny * w + nx] = 1;
            q.push({nx, ny});
          }
      }
      if (comp.size() > best.size()) best = std::move(comp);
    }
  return best;
}

inline hmdiris::LabelMap refine_once(const hmdiris::LabelMap& labels) {
  using hmdiris::Label;
  hmdiris::LabelMap out(labels.width(), labels.height(), Label::Background);
  for (Label cls : {Label::Sclera, Label::Iris, Label::Pupil}) {
    const auto hull = gift_wrap(largest_component(labels, cls));
    if (hull.empty()) continue;
    for (std::size_t y = 0; y < labels.height(); ++y)
      for (std::size_t x = 0; x < labels.width(); ++x)
        if (inside_hull(hull, {static_cast<long long>(x), static_cast<long long>(y)}))
          out(x, y) = cls;
  }
  return out;
}

inline hmdiris::LabelMap refine(const hmdiris::LabelMap& labels) {
  hmdiris::LabelMap cur = refine_once(labels);
  for (int i = 0; i < 64; ++i) {
    hmdiris::LabelMap next = refine_once(cur);
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur;
}

/// Exhaustive pixel-distance estimates of the two circles: centroid of the
/// pupil, the nearest pupil pixel with a non-pupil 4-neighbour, and the
/// farthest iris pixel.
struct CircleFit {
  double cx, cy, pupil_radius, iris_radius;
};

inline CircleFit fit_circles(const hmdiris::LabelMap& labels) {
  using hmdiris::Label;
  double sx = 0, sy = 0, n = 0;
  for (std::size_t y = 0; y < labels.height(); ++y)
    for (std::size_t x = 0; x < labels.width(); ++x)
      if (labels(x, y) == Label::Pupil) sx += x, sy += y, n += 1;
  CircleFit f{sx / n, sy / n, std::numeric_limits<double>::infinity(), 0.0};
  const long w = long(labels.width()), h = long(labels.height());
  auto touches_other = [&](long x, long y) {
    const long d[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (auto& o : d) {
      const long nx = x + o[0], ny = y + o[1];
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) return true;
      if (labels(std::size_t(nx), std::size_t(ny)) != Label::Pupil) return true;
    }
    return false;
  };
  for (std::size_t y = 0; y < labels.height(); ++y)
    for (std::size_t x = 0; x < labels.width(); ++x) {
      const double d = std::hypot(x - f.cx, y - f.cy);
      if (labels(x, y) == Label::Pupil && touches_other(x, y))
        f.pupil_radius = std::min(f.pupil_radius, d);
      if (labels(x, y) == Label::Iris) f.iris_radius = std::max(f.iris_radius, d);
    }
  return f;
}

// ---------------------------------------------------------------- encoders

/// Band-averaged Log-Gabor response by direct O(N^2) DFT.
inline std::vector<std::vector<std::complex<double>>> log_gabor_response(
    const hmdiris::NormalizedIris& iris, const hmdiris::LogGaborParams& p) {
  const std::size_t n = iris.angular_size();
  const std::size_t rows = iris.radial_size();
  const double pi = std::numbers::pi;
  std::vector<std::vector<std::complex<double>>> out;
  for (std::size_t b = 0; b < p.radial_bands; ++b) {
    const std::size_t r0 = b * rows / p.radial_bands, r1 = (b + 1) * rows / p.radial_bands;
    std::vector<double> x(n, 0.0);
    for (std::size_t r = r0; r < r1; ++r)
      for (std::size_t i = 0; i < n; ++i) x[i] += iris.texture(i, r) / double(r1 - r0);
    std::vector<std::complex<double>> spec(n);
    for (std::size_t k = 1; k <= n / 2; ++k) {
      std::complex<double> acc = 0;
      for (std::size_t m = 0; m < n; ++m) acc += x[m] * std::polar(1.0, -2 * pi * k * m / n);
      const double f = double(k) / n, f0 = 1.0 / p.center_wavelength;
      const double s = std::log(p.sigma_over_f);
      spec[k] = acc * std::exp(-std::pow(std::log(f / f0), 2) / (2 * s * s));
    }
    std::vector<std::complex<double>> resp(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> acc = 0;
      for (std::size_t k = 1; k <= n / 2; ++k) acc += spec[k] * std::polar(1.0, 2 * pi * k * i / n);
      resp[i] = acc / double(n);
    }
    out.push_back(std::move(resp));
  }
  return out;
}

/// Unnormalised DCT-II coefficients 1..K of the Hann-windowed,
/// row-averaged patch starting at column `start` of radial stack `stack`.
inline std::vector<double> dct_patch(const hmdiris::NormalizedIris& iris,
                                     const hmdiris::DctParams& p, std::size_t stack,
                                     std::size_t start) {
  const double pi = std::numbers::pi;
  const std::size_t n = iris.angular_size(), pw = p.patch_width;
  std::vector<double> out;
  for (std::size_t k = 1; k <= p.coeffs_kept; ++k) {
    double acc = 0;
    for (std::size_t j = 0; j < pw; ++j) {
      double mean = 0;
      for (std::size_t r = stack * p.patch_height; r < (stack + 1) * p.patch_height; ++r)
        mean += iris.texture((start + j) % n, r);
      mean /= double(p.patch_height);
      const double hann = 0.5 - 0.5 * std::cos(2 * pi * (j + 0.5) / pw);
      acc += hann * mean * std::cos(pi * (j + 0.5) * k / pw);
    }
    out.push_back(acc);
  }
  return out;
}

/// Cumulative-sum bits of one group: 1 on [argmin, argmax] when the
/// minimum comes first.
inline std::vector<bool> cusum_bits(const std::vector<double>& v) {
  double mean = 0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  std::vector<double> s(v.size());
  double run = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s[i] = run += v[i] - mean;
  const auto lo = std::size_t(std::min_element(s.begin(), s.end()) - s.begin());
  const auto hi = std::size_t(std::max_element(s.begin(), s.end()) - s.begin());
  std::vector<bool> bits(v.size(), false);
  if (lo < hi)
    for (std::size_t i = lo; i <= hi; ++i) bits[i] = true;
  return bits;
}

}  // namespace oracle
