#include <gtest/gtest.h>

#include <random>

#include "hmdiris/error.hpp"
#include "hmdiris/trustsim.hpp"
#include "oracles/oracles.hpp"

using namespace hmdiris;

namespace {

TrustConfig config(double T, double imr_th = 0.0) {
  TrustConfig c;
  c.threshold = T;
  c.imr_threshold = imr_th;
  return c;
}

std::vector<TrustFrame> scripted(std::mt19937_64& rng, std::size_t n, double imr_th) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<TrustFrame> frames;
  for (std::size_t i = 0; i < n; ++i) {
    const double imr = u(rng) < 0.15 ? 0.0 : u(rng);
    TrustFrame f{imr, std::nullopt};
    if (imr >= imr_th) f.cs = u(rng) < 0.7 ? 0.5 + 0.4 * u(rng) : 0.3 * u(rng);
    frames.push_back(f);
  }
  return frames;
}

}  // namespace

TEST(Trust, InitialValueIsThreshold) {
  for (double T : {0.5452, 0.0, 1.0}) {
    const TrustState s = init_trust(config(T));
    EXPECT_EQ(s.tv, T);
    EXPECT_FALSE(s.locked_out);
    EXPECT_EQ(s.update_count, 0u);
  }
}

TEST(Trust, UpdateCases) {
  const TrustConfig c = config(0.5452);
  TrustState s = init_trust(c);
  EXPECT_EQ(update_trust(s, Score{0.5452}, c).tv, 0.5452);
  EXPECT_NEAR(update_trust(s, LowQuality{}, c).tv, 0.5352, 1e-12);
  const TrustConfig half = config(0.5);
  s.tv = 0.99;
  EXPECT_EQ(update_trust(s, Score{1.0}, half).tv, 1.0);
  s.tv = -0.995;
  EXPECT_EQ(update_trust(s, LowQuality{}, half).tv, -1.0);
  EXPECT_EQ(update_trust(s, Score{0.0}, half).tv, -1.0);
  EXPECT_EQ(update_trust(s, Score{0.2}, half).update_count, 1u);
}

TEST(Trust, RejectsBadInput) {
  const TrustConfig c = config(0.5);
  const TrustState s = init_trust(c);
  EXPECT_THROW(update_trust(s, Score{1.2}, c), Error);
  EXPECT_THROW(update_trust(s, Score{-0.1}, c), Error);
  EXPECT_THROW(init_trust(config(1.5)), Error);
  TrustConfig bad = config(0.5);
  bad.alpha = 0;
  EXPECT_THROW(validate(bad), Error);
  // a gated-in frame without a score
  EXPECT_THROW(run_session({{0.9, std::nullopt}}, c), Error);
}

TEST(Trust, ScriptedSessionMatchesReferenceSimulator) {
  std::mt19937_64 rng(1);
  for (double imr_th : {0.0, 0.7}) {
    const auto frames = scripted(rng, 200, imr_th);
    TrustConfig c = config(0.5131, imr_th);
    const SessionReport r = run_session(frames, c, "S", Scenario::Genuine);
    const auto ref = oracle::simulate_trust(frames, c.threshold, c.alpha, imr_th);
    ASSERT_EQ(r.trajectory.size(), 200u);
    for (std::size_t i = 0; i < ref.size(); ++i) ASSERT_EQ(r.trajectory[i], ref[i]) << i;
    std::size_t below = 0, above = 0;
    for (double tv : ref) below += tv < c.threshold, above += tv > c.threshold;
    EXPECT_DOUBLE_EQ(r.pct_below_threshold, 100.0 * below / 200);
    EXPECT_DOUBLE_EQ(r.pct_above_threshold, 100.0 * above / 200);
    EXPECT_LE(r.pct_below_threshold + r.pct_above_threshold, 100.0);
  }
}

TEST(Trust, ClampingUnderFuzz) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  TrustConfig c = config(0.5);
  TrustState s = init_trust(c);
  for (int i = 0; i < 1000000; ++i) {
    if (i % 1000 == 0) {
      c.threshold = u(rng);
      c.alpha = 0.001 + u(rng);
    }
    const TrustEvent e = u(rng) < 0.2 ? TrustEvent{LowQuality{}} : TrustEvent{Score{u(rng)}};
    s = update_trust(s, e, c);
    ASSERT_GE(s.tv, -1.0);
    ASSERT_LE(s.tv, 1.0);
  }
}

TEST(Trust, MonotoneAndSymmetric) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const TrustConfig c = config(0.3 + 0.4 * u(rng));
    TrustState s{-0.2 + 0.4 * u(rng), false, 0};
    const double a = u(rng), b = u(rng);
    const double lo = std::min(a, b), hi = std::max(a, b);
    EXPECT_LE(update_trust(s, Score{lo}, c).tv, update_trust(s, Score{hi}, c).tv);
    const double d = 0.2 * u(rng);
    const TrustState up = update_trust(s, Score{c.threshold + d}, c);
    const TrustState back = update_trust(up, Score{c.threshold - d}, c);
    EXPECT_NEAR(back.tv, s.tv, 1e-12);
  }
}

TEST(Trust, AllGenuineAboveThresholdNeverDropsBelow) {
  std::vector<TrustFrame> frames(50, TrustFrame{0.9, 0.8});
  const SessionReport r = run_session(frames, config(0.5));
  EXPECT_EQ(r.pct_below_threshold, 0.0);
  EXPECT_EQ(r.pct_above_threshold, 100.0);
}

TEST(Trust, AllLowQualityDecays) {
  std::vector<TrustFrame> frames(300, TrustFrame{0.1, std::nullopt});
  const SessionReport r = run_session(frames, config(0.5, 0.7));
  EXPECT_EQ(r.pct_below_threshold, 100.0);
  EXPECT_EQ(r.trajectory.back(), -1.0);
  EXPECT_NEAR(r.trajectory[0], 0.49, 1e-12);
}

TEST(Trust, LockoutStopsSession) {
  TrustConfig c = config(0.5);
  c.lockout_enabled = true;
  std::vector<TrustFrame> frames{{0.9, 0.9}, {0.9, 0.9}, {0.9, 0.0}, {0.9, 0.0}, {0.9, 1.0}};
  const SessionReport r = run_session(frames, c);
  // 0.5 -> 0.9 -> 1.0 -> 0.5 (not below) -> 0.0 (locked)
  ASSERT_TRUE(r.lockout_frame.has_value());
  EXPECT_EQ(*r.lockout_frame, 4u);
  EXPECT_EQ(r.trajectory.size(), 4u);
  TrustState locked{0.1, true, 4};
  EXPECT_EQ(update_trust(locked, Score{1.0}, c).tv, 0.1);
  EXPECT_EQ(update_trust(locked, Score{1.0}, c).update_count, 4u);
  c.lockout_threshold = -0.5;
  EXPECT_FALSE(run_session(frames, c).lockout_frame.has_value());
}
