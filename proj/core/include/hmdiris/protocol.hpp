#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace hmdiris {

struct SessionEntry {
  std::size_t frame_index = 0;
  double imr = 0.0;
};

/// Captures of one identity in capture order.
struct IdentitySession {
  std::string identity_id;
  std::vector<SessionEntry> captures;  // strictly increasing frame_index
};

struct ProtocolSplit {
  std::vector<SessionEntry> reference_pool;
  std::vector<SessionEntry> skipped;
  std::vector<SessionEntry> probes;
  std::size_t selected_reference = 0;  // index into reference_pool

  const SessionEntry& reference() const { return reference_pool.at(selected_reference); }
};

inline constexpr std::size_t kDefaultReferenceCount = 10;
inline constexpr std::size_t kDefaultSkipCount = 5;

/// First n_ref captures form the reference pool, the next n_skip are
/// dropped, the remainder are probes. Throws SessionTooShort unless at least
/// one probe remains.
ProtocolSplit split_session(const IdentitySession& session,
                            std::size_t n_ref = kDefaultReferenceCount,
                            std::size_t n_skip = kDefaultSkipCount);

/// Index of the highest-IMR entry, earliest on ties. Throws EmptyPool.
std::size_t select_reference(std::span<const SessionEntry> pool);

/// Occurrences of sample gaps between consecutive accepted probes, binned
/// as SG 0-1, 2-3, 4-5, 6-7 and >= 8.
struct GapHistogram {
  static constexpr std::size_t kBins = 5;
  std::array<std::size_t, kBins> bins{};
  std::size_t max_sg = 0;
  std::size_t leading_rejections = 0;  // rejected probes before the first kept one

  static std::size_t bin_of(std::size_t gap) noexcept { return gap >= 8 ? 4 : gap / 2; }
  std::size_t occurrences() const noexcept;
  GapHistogram& operator+=(const GapHistogram& other) noexcept;
  friend bool operator==(const GapHistogram&, const GapHistogram&) = default;
};

struct FilteredProbes {
  std::vector<SessionEntry> kept;
  GapHistogram gaps;
};

/// Keeps probes with imr >= imr_threshold and records the number of rejected
/// probes between each pair of consecutive kept probes.
FilteredProbes filter_probes(std::span<const SessionEntry> probes, double imr_threshold);

/// Column headings of the gap report, matching GapHistogram::bins.
inline constexpr std::array<const char*, GapHistogram::kBins> kGapBinNames{
    "SG 0-1", "SG 2-3", "SG 4-5", "SG 6-7", "SG >=8"};

}  // namespace hmdiris
