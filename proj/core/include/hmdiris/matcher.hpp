#pragma once

#include <cstddef>

#include "hmdiris/iriscode.hpp"

namespace hmdiris {

struct ComparisonScore {
  double distance = 0.0;
  double similarity = 1.0;
  std::size_t overlap_bits = 0;   // jointly mask-valid bits at the chosen shift
  std::size_t differing_bits = 0; // of those, bits that disagree
  int shift_used = 0;             // bit columns; b was rotated by this amount
};

struct MatchOptions {
  int max_shift = 8;            // bit columns in each direction
  std::size_t min_overlap = 1;  // joint mask bits required for a valid score
};

/// Masked Hamming distance. Throws EncoderMismatch, LengthMismatch, or
/// InsufficientOverlap.
ComparisonScore hamming(const IrisCode& a, const IrisCode& b, std::size_t min_overlap = 1);

/// Minimum masked Hamming distance over circular shifts of `b` by
/// s in [-max_shift, max_shift] bit columns, code and mask rotated together
/// within each angular row: shifted b[col] = b[(col - s) mod extent].
/// Ties go to the smallest |s|, negative first. Shifts whose overlap falls
/// below min_overlap are skipped; if all do, InsufficientOverlap is thrown.
ComparisonScore shifted_hamming(const IrisCode& a, const IrisCode& b,
                                const MatchOptions& options = {});

inline double to_similarity(const ComparisonScore& score) noexcept { return 1.0 - score.distance; }

/// Returns a copy of `code` with every angular row rotated by `shift`
/// columns (result[col] = code[(col - shift) mod extent]).
IrisCode rotate_columns(const IrisCode& code, int shift);

}  // namespace hmdiris
