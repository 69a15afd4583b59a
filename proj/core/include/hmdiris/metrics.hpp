#pragma once

#include <vector>

namespace hmdiris {

/// Similarity scores (higher = more likely genuine).
struct ScoreSet {
  std::vector<double> genuine;
  std::vector<double> impostor;
};

/// Operating point for the decision "accept iff score >= threshold".
/// The first and last points use -inf / +inf sentinels.
struct RocPoint {
  double threshold = 0.0;
  double fmr = 0.0;   // impostors accepted
  double fnmr = 0.0;  // genuines rejected
};

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

struct MetricsReport {
  double eer = 0.0;
  double eer_threshold = 0.0;
  double fmr10 = 0.0;
  double auc = 0.0;
  std::size_t n_genuine = 0;
  std::size_t n_impostor = 0;
  std::vector<RocPoint> roc_points;
};

/// Points at every distinct observed score plus the two sentinels, in
/// ascending threshold order. Throws EmptyScores.
std::vector<RocPoint> roc(const ScoreSet& scores);

/// Grid threshold minimising |FMR - FNMR| (lowest threshold on ties);
/// eer is the mean of the two rates there.
EerResult eer(const ScoreSet& scores);

/// Lowest FNMR over thresholds whose FMR <= max_fmr.
double fmr10(const ScoreSet& scores, double max_fmr = 0.10);

/// Trapezoidal area under (FMR, 1 - FNMR); equals the Mann-Whitney
/// statistic with half credit for ties.
double auc(const ScoreSet& scores);

MetricsReport evaluate(const ScoreSet& scores);

}  // namespace hmdiris
