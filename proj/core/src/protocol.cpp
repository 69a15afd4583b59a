#include "hmdiris/protocol.hpp"

#include <algorithm>
#include <numeric>

#include "hmdiris/error.hpp"

namespace hmdiris {

std::size_t GapHistogram::occurrences() const noexcept {
  return std::accumulate(bins.begin(), bins.end(), std::size_t{0});
}

GapHistogram& GapHistogram::operator+=(const GapHistogram& other) noexcept {
  for (std::size_t i = 0; i < kBins; ++i) bins[i] += other.bins[i];
  max_sg = std::max(max_sg, other.max_sg);
  leading_rejections += other.leading_rejections;
  return *this;
}

ProtocolSplit split_session(const IdentitySession& session, std::size_t n_ref,
                            std::size_t n_skip) {
  const auto& caps = session.captures;
  if (n_ref == 0) throw Error(ErrorCode::InvalidConfig, "reference pool size must be positive");
  if (caps.size() <= n_ref + n_skip) {
    throw Error(ErrorCode::SessionTooShort,
                session.identity_id + " has " + std::to_string(caps.size()) +
                    " captures; need more than " + std::to_string(n_ref + n_skip));
  }
  for (std::size_t i = 1; i < caps.size(); ++i) {
    if (caps[i].frame_index <= caps[i - 1].frame_index) {
      throw Error(ErrorCode::InvalidConfig,
                  session.identity_id + ": frame indices must be strictly increasing");
    }
  }
  ProtocolSplit split;
  const auto ref_end = caps.begin() + static_cast<std::ptrdiff_t>(n_ref);
  const auto skip_end = ref_end + static_cast<std::ptrdiff_t>(n_skip);
  split.reference_pool.assign(caps.begin(), ref_end);
  split.skipped.assign(ref_end, skip_end);
  split.probes.assign(skip_end, caps.end());
  split.selected_reference = select_reference(split.reference_pool);
  return split;
}

std::size_t select_reference(std::span<const SessionEntry> pool) {
  if (pool.empty()) throw Error(ErrorCode::EmptyPool, "reference pool is empty");
  std::size_t best = 0;
  for (std::size_t i = 1; i < pool.size(); ++i) {
    if (pool[i].imr > pool[best].imr) best = i;
  }
  return best;
}

FilteredProbes filter_probes(std::span<const SessionEntry> probes, double imr_threshold) {
  FilteredProbes out;
  std::size_t rejected_run = 0;
  for (const auto& p : probes) {
    if (p.imr < imr_threshold) {
      ++rejected_run;
      continue;
    }
    if (out.kept.empty()) {
      out.gaps.leading_rejections = rejected_run;
    } else {
      ++out.gaps.bins[GapHistogram::bin_of(rejected_run)];
      out.gaps.max_sg = std::max(out.gaps.max_sg, rejected_run);
    }
    rejected_run = 0;
    out.kept.push_back(p);
  }
  return out;
}

}  // namespace hmdiris
