#include "hmdiris/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "hmdiris/error.hpp"

namespace hmdiris {
namespace {

struct GridPoint {
  double threshold;
  std::uint64_t impostor_ge;  // impostor scores >= threshold
  std::uint64_t genuine_lt;   // genuine scores < threshold
};

struct ScoreGrid {
  std::uint64_t n_genuine = 0;
  std::uint64_t n_impostor = 0;
  std::vector<GridPoint> points;

  double fmr(const GridPoint& p) const {
    return static_cast<double>(p.impostor_ge) / static_cast<double>(n_impostor);
  }
  double fnmr(const GridPoint& p) const {
    return static_cast<double>(p.genuine_lt) / static_cast<double>(n_genuine);
  }
};

std::vector<double> sorted_checked(const std::vector<double>& v) {
  std::vector<double> s(v);
  for (double x : s) {
    if (std::isnan(x)) throw Error(ErrorCode::InvalidScore, "NaN score");
  }
  std::sort(s.begin(), s.end());
  return s;
}

ScoreGrid build_grid(const ScoreSet& scores) {
  if (scores.genuine.empty() || scores.impostor.empty()) {
    throw Error(ErrorCode::EmptyScores, "genuine and impostor sets must both be non-empty");
  }
  const auto gen = sorted_checked(scores.genuine);
  const auto imp = sorted_checked(scores.impostor);
  ScoreGrid g{gen.size(), imp.size(), {}};
  g.points.reserve(gen.size() + imp.size() + 2);

  constexpr double inf = std::numeric_limits<double>::infinity();
  g.points.push_back({-inf, g.n_impostor, 0});
  std::size_t gi = 0;
  std::size_t ii = 0;
  while (gi < gen.size() || ii < imp.size()) {
    double t = inf;
    if (gi < gen.size()) t = gen[gi];
    if (ii < imp.size()) t = std::min(t, imp[ii]);
    // Counts strictly below t.
    g.points.push_back({t, g.n_impostor - ii, gi});
    while (gi < gen.size() && gen[gi] == t) ++gi;
    while (ii < imp.size() && imp[ii] == t) ++ii;
  }
  g.points.push_back({inf, 0, g.n_genuine});
  return g;
}

EerResult eer_on(const ScoreGrid& g) {
  const GridPoint* best = nullptr;
  std::uint64_t best_gap = 0;
  for (const auto& p : g.points) {
    // |fmr - fnmr| scaled by n_genuine * n_impostor, exact.
    const std::uint64_t a = p.impostor_ge * g.n_genuine;
    const std::uint64_t b = p.genuine_lt * g.n_impostor;
    const std::uint64_t gap = a > b ? a - b : b - a;
    if (!best || gap < best_gap) {
      best = &p;
      best_gap = gap;
    }
  }
  return {(g.fmr(*best) + g.fnmr(*best)) / 2.0, best->threshold};
}

double fmr10_on(const ScoreGrid& g, double max_fmr) {
  bool found = false;
  std::uint64_t best = 0;
  for (const auto& p : g.points) {
    if (g.fmr(p) <= max_fmr && (!found || p.genuine_lt < best)) {
      best = p.genuine_lt;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::NoQualifyingThreshold, "no threshold reaches the FMR bound");
  return static_cast<double>(best) / static_cast<double>(g.n_genuine);
}

double auc_on(const ScoreGrid& g) {
  std::uint64_t twice_area = 0;
  for (std::size_t k = 0; k + 1 < g.points.size(); ++k) {
    const auto& p = g.points[k];
    const auto& q = g.points[k + 1];
    const std::uint64_t d_imp = p.impostor_ge - q.impostor_ge;
    const std::uint64_t tpr_sum = (g.n_genuine - p.genuine_lt) + (g.n_genuine - q.genuine_lt);
    twice_area += d_imp * tpr_sum;
  }
  return static_cast<double>(twice_area) /
         (2.0 * static_cast<double>(g.n_genuine) * static_cast<double>(g.n_impostor));
}

}  // namespace

std::vector<RocPoint> roc(const ScoreSet& scores) {
  const ScoreGrid g = build_grid(scores);
  std::vector<RocPoint> out;
  out.reserve(g.points.size());
  for (const auto& p : g.points) out.push_back({p.threshold, g.fmr(p), g.fnmr(p)});
  return out;
}

EerResult eer(const ScoreSet& scores) { return eer_on(build_grid(scores)); }

double fmr10(const ScoreSet& scores, double max_fmr) {
  return fmr10_on(build_grid(scores), max_fmr);
}

double auc(const ScoreSet& scores) { return auc_on(build_grid(scores)); }

MetricsReport evaluate(const ScoreSet& scores) {
  const ScoreGrid g = build_grid(scores);
  MetricsReport r;
  const auto e = eer_on(g);
  r.eer = e.eer;
  r.eer_threshold = e.threshold;
  r.fmr10 = fmr10_on(g, 0.10);
  r.auc = auc_on(g);
  r.n_genuine = g.n_genuine;
  r.n_impostor = g.n_impostor;
  r.roc_points.reserve(g.points.size());
  for (const auto& p : g.points) r.roc_points.push_back({p.threshold, g.fmr(p), g.fnmr(p)});
  return r;
}

}  // namespace hmdiris
