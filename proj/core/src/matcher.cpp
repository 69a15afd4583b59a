#include "hmdiris/matcher.hpp"

#include <bit>
#include <string>
#include <vector>

#include "hmdiris/error.hpp"

namespace hmdiris {
namespace {

void check_compatible(const IrisCode& a, const IrisCode& b) {
  if (a.encoder() != b.encoder()) {
    throw Error(ErrorCode::EncoderMismatch, std::string(encoder_name(a.encoder())) + " vs " +
                                                std::string(encoder_name(b.encoder())));
  }
  if (a.bit_count() != b.bit_count() || a.angular_extent() != b.angular_extent()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(a.bit_count()) + "/" + std::to_string(a.angular_extent()) +
                    " vs " + std::to_string(b.bit_count()) + "/" +
                    std::to_string(b.angular_extent()));
  }
}

std::uint64_t tail_mask(std::size_t extent) {
  const std::size_t r = extent % 64;
  return r == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1;
}

// Row bits followed by a second copy, so any rotation is a contiguous read.
void build_doubled(std::span<const std::uint64_t> row, std::size_t extent,
                   std::span<std::uint64_t> out) {
  std::fill(out.begin(), out.end(), 0);
  std::copy(row.begin(), row.end(), out.begin());
  const std::size_t q = extent / 64;
  const std::size_t r = extent % 64;
  for (std::size_t k = 0; k < row.size(); ++k) {
    out[q + k] |= row[k] << r;
    if (r != 0) out[q + k + 1] |= row[k] >> (64 - r);
  }
}

inline std::uint64_t read_word(const std::uint64_t* d, std::size_t bit) {
  const std::size_t q = bit / 64;
  const std::size_t r = bit % 64;
  return r == 0 ? d[q] : (d[q] >> r) | (d[q + 1] << (64 - r));
}

struct Counts {
  std::size_t differing = 0;
  std::size_t overlap = 0;
};

// `a` and `b` must already be compatible.
class ShiftScorer {
 public:
  ShiftScorer(const IrisCode& a, const IrisCode& b)
      : a_(a), extent_(b.angular_extent()), wpr_(b.words_per_row()),
        dwords_((2 * extent_ + 63) / 64 + 2), tail_(tail_mask(extent_)),
        code_(b.rows() * dwords_), mask_(b.rows() * dwords_) {
    for (std::size_t r = 0; r < b.rows(); ++r) {
      build_doubled(b.code_row(r), extent_, {code_.data() + r * dwords_, dwords_});
      build_doubled(b.mask_row(r), extent_, {mask_.data() + r * dwords_, dwords_});
    }
  }

  Counts at(int shift) const {
    const auto w = static_cast<long long>(extent_);
    const auto offset = static_cast<std::size_t>(((-static_cast<long long>(shift)) % w + w) % w);
    Counts c;
    for (std::size_t r = 0; r < a_.rows(); ++r) {
      const auto ac = a_.code_row(r);
      const auto am = a_.mask_row(r);
      const std::uint64_t* bc = code_.data() + r * dwords_;
      const std::uint64_t* bm = mask_.data() + r * dwords_;
      for (std::size_t k = 0; k < wpr_; ++k) {
        std::uint64_t joint = am[k] & read_word(bm, offset + 64 * k);
        if (k + 1 == wpr_) joint &= tail_;
        const std::uint64_t diff = (ac[k] ^ read_word(bc, offset + 64 * k)) & joint;
        c.overlap += static_cast<std::size_t>(std::popcount(joint));
        c.differing += static_cast<std::size_t>(std::popcount(diff));
      }
    }
    return c;
  }

 private:
  const IrisCode& a_;
  std::size_t extent_;
  std::size_t wpr_;
  std::size_t dwords_;
  std::uint64_t tail_;
  std::vector<std::uint64_t> code_;
  std::vector<std::uint64_t> mask_;
};

ComparisonScore make_score(const Counts& c, int shift) {
  ComparisonScore s;
  s.overlap_bits = c.overlap;
  s.differing_bits = c.differing;
  s.distance = static_cast<double>(c.differing) / static_cast<double>(c.overlap);
  s.similarity = 1.0 - s.distance;
  s.shift_used = shift;
  return s;
}

}  // namespace

ComparisonScore hamming(const IrisCode& a, const IrisCode& b, std::size_t min_overlap) {
  check_compatible(a, b);
  Counts c;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto ac = a.code_row(r);
    const auto am = a.mask_row(r);
    const auto bc = b.code_row(r);
    const auto bm = b.mask_row(r);
    for (std::size_t k = 0; k < ac.size(); ++k) {
      const std::uint64_t joint = am[k] & bm[k];
      c.overlap += static_cast<std::size_t>(std::popcount(joint));
      c.differing += static_cast<std::size_t>(std::popcount((ac[k] ^ bc[k]) & joint));
    }
  }
  if (c.overlap < std::max<std::size_t>(min_overlap, 1)) {
    throw Error(ErrorCode::InsufficientOverlap,
                "joint mask has " + std::to_string(c.overlap) + " bits");
  }
  return make_score(c, 0);
}

ComparisonScore shifted_hamming(const IrisCode& a, const IrisCode& b,
                                const MatchOptions& options) {
  check_compatible(a, b);
  if (options.max_shift < 0) throw Error(ErrorCode::InvalidConfig, "max_shift must be >= 0");
  const std::size_t min_overlap = std::max<std::size_t>(options.min_overlap, 1);
  const ShiftScorer scorer(a, b);

  bool found = false;
  Counts best;
  int best_shift = 0;
  auto consider = [&](int s) {
    const Counts c = scorer.at(s);
    if (c.overlap < min_overlap) return;
    // differing/overlap < best.differing/best.overlap, exactly.
    if (!found || c.differing * best.overlap < best.differing * c.overlap) {
      best = c;
      best_shift = s;
      found = true;
    }
  };
  // Visiting 0, -1, +1, -2, +2, ... and keeping only strict improvements
  // implements the tie rule.
  consider(0);
  for (int m = 1; m <= options.max_shift; ++m) {
    consider(-m);
    consider(m);
  }
  if (!found) {
    throw Error(ErrorCode::InsufficientOverlap, "no shift reaches the minimum overlap");
  }
  return make_score(best, best_shift);
}

IrisCode rotate_columns(const IrisCode& code, int shift) {
  IrisCode out(code.encoder(), code.rows(), code.angular_extent());
  const auto w = static_cast<long long>(code.angular_extent());
  for (std::size_t r = 0; r < code.rows(); ++r) {
    for (std::size_t col = 0; col < code.angular_extent(); ++col) {
      const auto src = static_cast<std::size_t>(
          ((static_cast<long long>(col) - shift) % w + w) % w);
      out.set_code_bit(r, col, code.code_bit(r, src));
      out.set_mask_bit(r, col, code.mask_bit(r, src));
    }
  }
  return out;
}

}  // namespace hmdiris
