#include <gtest/gtest.h>

#include "hmdiris/mask_ingest.hpp"
#include "hmdiris/synthetic.hpp"

using namespace hmdiris;

TEST(Synthetic, RenderIsDeterministic) {
  const SyntheticTexture t = make_identity_texture(3);
  std::mt19937_64 rng(1);
  const EyePose pose = random_pose(rng);
  const EyeCapture a = render_eye(t, pose, 42);
  const EyeCapture b = render_eye(t, pose, 42);
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_NE(render_eye(t, pose, 43).image, a.image);
}

TEST(Synthetic, GeometryRecoverable) {
  const SyntheticTexture t = make_identity_texture(4);
  EyePose pose;
  pose.upper_lid = pose.lower_lid = 1.3;
  pose.stray_blobs = 3;
  const EyeCapture cap = render_eye(t, pose, 1);
  const EyeGeometry g = fit_eye_geometry(refine_labels(cap.labels));
  EXPECT_NEAR(g.pupil_center.x, pose.center_x, 1.0);
  EXPECT_NEAR(g.pupil_center.y, pose.center_y, 1.0);
  EXPECT_NEAR(g.pupil_radius, pose.pupil_radius, 1.0);
  EXPECT_NEAR(g.iris_radius, pose.iris_radius, 1.0);
}

TEST(Synthetic, ClosedEyeHasNoIris) {
  EyePose pose;
  pose.upper_lid = -1.2;
  pose.lower_lid = 1.0;
  const EyeCapture cap = render_eye(make_identity_texture(1), pose, 1);
  for (Label l : cap.labels.pixels()) ASSERT_EQ(l, Label::Background);
}

TEST(Synthetic, IdentitiesDiffer) {
  const SyntheticTexture a = make_identity_texture(1), b = make_identity_texture(2);
  EXPECT_NE(a(0.3, 0.5), b(0.3, 0.5));
  EXPECT_EQ(a(0.3, 0.5), make_identity_texture(1)(0.3, 0.5));
}
