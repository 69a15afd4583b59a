#include "hmdiris/trustsim.hpp"

#include <algorithm>
#include <cmath>

#include "hmdiris/error.hpp"

namespace hmdiris {

void validate(const TrustConfig& c) {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(c.threshold)) throw Error(ErrorCode::InvalidConfig, "T must lie in [0,1]");
  if (!(c.alpha > 0.0)) throw Error(ErrorCode::InvalidConfig, "alpha must be positive");
  if (!unit(c.imr_threshold)) throw Error(ErrorCode::InvalidConfig, "IMR threshold must lie in [0,1]");
  if (c.lockout_threshold && !(*c.lockout_threshold >= -1.0 && *c.lockout_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "lockout threshold must lie in [-1,1]");
  }
}

TrustState init_trust(const TrustConfig& config) {
  validate(config);
  return {config.threshold, false, 0};
}

TrustState update_trust(const TrustState& state, const TrustEvent& event,
                        const TrustConfig& config) {
  if (state.locked_out) return state;
  TrustState next = state;
  const double t = config.threshold;
  if (std::holds_alternative<LowQuality>(event)) {
    next.tv = std::max(state.tv - config.alpha, -1.0);
  } else {
    const double cs = std::get<Score>(event).cs;
    if (!(cs >= 0.0 && cs <= 1.0)) {
      throw Error(ErrorCode::InvalidScore, "comparison score " + std::to_string(cs));
    }
    if (cs >= t) {
      next.tv = std::min(state.tv + (cs - t), 1.0);
    } else {
      next.tv = std::max(state.tv - (t - cs), -1.0);
    }
  }
  ++next.update_count;
  if (config.lockout_enabled && next.tv < config.effective_lockout_threshold()) {
    next.locked_out = true;
  }
  return next;
}

SessionReport run_session(const std::vector<TrustFrame>& frames, const TrustConfig& config,
                          std::string identity_id, Scenario scenario) {
  SessionReport report;
  report.identity_id = std::move(identity_id);
  report.scenario = scenario;

  TrustState state = init_trust(config);
  std::size_t below = 0;
  std::size_t above = 0;
  for (std::size_t i = 0; i < frames.size() && !state.locked_out; ++i) {
    const auto& f = frames[i];
    TrustEvent event = LowQuality{};
    if (f.imr >= config.imr_threshold) {
      if (!f.cs) {
        throw Error(ErrorCode::InvalidScore,
                    "frame " + std::to_string(i) + " passed the IMR gate without a score");
      }
      event = Score{*f.cs};
    }
    state = update_trust(state, event, config);
    report.trajectory.push_back(state.tv);
    if (state.tv < config.threshold) ++below;
    if (state.tv > config.threshold) ++above;
    if (state.locked_out) report.lockout_frame = i + 1;
  }
  if (state.update_count > 0) {
    const double n = static_cast<double>(state.update_count);
    report.pct_below_threshold = 100.0 * static_cast<double>(below) / n;
    report.pct_above_threshold = 100.0 * static_cast<double>(above) / n;
  }
  return report;
}

}  // namespace hmdiris
