#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "hmdiris/mask_ingest.hpp"

namespace hmdiris {

/// Band-limited iris pattern in pupil-normalised polar coordinates: angle
/// in radians, rho in [0, 1] from the pupil to the limbus.
struct SyntheticTexture {
  struct Component {
    int angular_freq;
    double radial_freq;
    double amplitude;
    double phase;
  };
  double base = 110.0;
  std::vector<Component> components;

  double operator()(double angle, double rho) const;
};

SyntheticTexture make_identity_texture(std::uint64_t seed);

/// Pose and occlusion of one synthetic frame.
struct EyePose {
  double center_x = 320.0;
  double center_y = 200.0;
  double pupil_radius = 30.0;
  double iris_radius = 75.0;
  double rotation = 0.0;       // radians, counter-clockwise on screen
  double upper_lid = -1.0;     // lid height above centre in iris radii (-1 = closed)
  double lower_lid = 1.0;      // lid depth below centre in iris radii
  double noise_sigma = 3.0;
  int stray_blobs = 0;         // small mislabelled iris islands
};

EyePose random_pose(std::mt19937_64& rng, std::size_t width = 640, std::size_t height = 400);

/// Renders a grayscale eye and its four-class label map.
EyeCapture render_eye(const SyntheticTexture& texture, const EyePose& pose,
                      std::uint64_t noise_seed, std::size_t width = 640,
                      std::size_t height = 400);

struct SyntheticDatasetSpec {
  std::size_t identities = 28;
  std::size_t frames_per_identity = 86;
  std::size_t width = 640;
  std::size_t height = 400;
  std::uint64_t seed = 7;
  double blink_probability = 0.03;
};

/// Writes `<root>/images/<id>/<frame>.png` and `<root>/labels/<id>/<frame>.png`.
void write_synthetic_dataset(const std::filesystem::path& root,
                             const SyntheticDatasetSpec& spec, std::size_t workers = 0);

}  // namespace hmdiris
