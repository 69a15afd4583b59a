#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hmdiris {

struct TrustConfig {
  double threshold = 0.5;  // T: EER threshold of the similarity scores
  double alpha = 0.01;     // penalty for a quality-rejected frame
  double imr_threshold = 0.0;
  bool lockout_enabled = false;
  std::optional<double> lockout_threshold;  // defaults to `threshold`

  double effective_lockout_threshold() const noexcept {
    return lockout_threshold.value_or(threshold);
  }
};

/// Throws InvalidConfig when a field is out of range.
void validate(const TrustConfig& config);

struct TrustState {
  double tv = 0.0;
  bool locked_out = false;
  std::size_t update_count = 0;
};

struct LowQuality {};
struct Score {
  double cs = 0.0;
};
using TrustEvent = std::variant<LowQuality, Score>;

TrustState init_trust(const TrustConfig& config);

/// Penalty-and-reward update, clamped to [-1, 1]. After a lockout the state
/// no longer changes. Throws InvalidScore for cs outside [0, 1].
TrustState update_trust(const TrustState& state, const TrustEvent& event,
                        const TrustConfig& config);

/// One captured frame: its IMR and, when it passed the quality gate, the
/// similarity against the session reference.
struct TrustFrame {
  double imr = 0.0;
  std::optional<double> cs;
};

enum class Scenario { Genuine, Impostor };

struct SessionReport {
  std::string identity_id;
  Scenario scenario = Scenario::Genuine;
  double pct_below_threshold = 0.0;
  double pct_above_threshold = 0.0;
  std::vector<double> trajectory;
  std::optional<std::size_t> lockout_frame;  // frames consumed until lockout
};

/// Frames with imr < imr_threshold become LowQuality events; the others
/// must carry cs (InvalidScore otherwise).
SessionReport run_session(const std::vector<TrustFrame>& frames, const TrustConfig& config,
                          std::string identity_id = {}, Scenario scenario = Scenario::Genuine);

}  // namespace hmdiris
