#include "hmdiris/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hmdiris/png_io.hpp"
#include "parallel.hpp"

namespace hmdiris {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finaliser over the combined words
  std::uint64_t z = a * 0x9E3779B97F4A7C15ull + b + 0x632BE59BD9B4E5F5ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint8_t clamp_pixel(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0l, 255l));
}

}  // namespace

double SyntheticTexture::operator()(double angle, double rho) const {
  double v = base;
  for (const auto& c : components) {
    v += c.amplitude * std::cos(c.angular_freq * angle + c.radial_freq * std::numbers::pi * rho +
                                c.phase);
  }
  return v;
}

SyntheticTexture make_identity_texture(std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 0x7e47));
  std::uniform_int_distribution<int> angular(3, 48);
  std::uniform_real_distribution<double> radial(0.3, 4.0);
  std::uniform_real_distribution<double> amplitude(6.0, 16.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::uniform_real_distribution<double> base(95.0, 125.0);

  SyntheticTexture tex;
  tex.base = base(rng);
  tex.components.resize(24);
  for (auto& c : tex.components) {
    c.angular_freq = angular(rng);
    c.radial_freq = radial(rng);
    c.amplitude = amplitude(rng);
    c.phase = phase(rng);
  }
  return tex;
}

EyePose random_pose(std::mt19937_64& rng, std::size_t width, std::size_t height) {
  std::normal_distribution<double> jitter(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  EyePose pose;
  pose.center_x = width / 2.0 + 12.0 * jitter(rng);
  pose.center_y = height / 2.0 + 8.0 * jitter(rng);
  pose.iris_radius = 75.0 + 1.5 * jitter(rng);
  pose.pupil_radius = 24.0 + 12.0 * unit(rng);
  pose.rotation = 0.02 * jitter(rng);
  pose.upper_lid = 0.55 + 0.6 * unit(rng);
  pose.lower_lid = 0.85 + 0.45 * unit(rng);
  pose.noise_sigma = 2.0 + 2.0 * unit(rng);
  pose.stray_blobs = unit(rng) < 0.4 ? 1 + static_cast<int>(3.0 * unit(rng)) : 0;
  return pose;
}

EyeCapture render_eye(const SyntheticTexture& texture, const EyePose& pose,
                      std::uint64_t noise_seed, std::size_t width, std::size_t height) {
  EyeCapture cap;
  cap.image = GrayImage(width, height);
  cap.labels = LabelMap(width, height, Label::Background);

  std::mt19937_64 rng(mix_seed(noise_seed, 0x5eed));
  const bool noisy = pose.noise_sigma > 0.0;
  std::normal_distribution<double> noise(0.0, noisy ? pose.noise_sigma : 1.0);

  const double cx = pose.center_x;
  const double cy = pose.center_y;
  const double rp = pose.pupil_radius;
  const double ri = pose.iris_radius;
  const double half_width = 2.4 * ri;

  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const double dx = static_cast<double>(x) - cx;
      const double dy = cy - static_cast<double>(y);
      const double u = dx / half_width;
      bool visible = false;
      if (std::abs(u) < 1.0) {
        const double taper = 1.0 - u * u;
        const double top = cy - pose.upper_lid * ri * taper;
        const double bottom = cy + pose.lower_lid * ri * taper;
        visible = static_cast<double>(y) >= top && static_cast<double>(y) <= bottom;
      }

      const double r = std::hypot(dx, dy);
      double value;
      Label label;
      if (!visible) {
        label = Label::Background;
        value = 140.0 + 15.0 * std::sin(static_cast<double>(x) / 40.0) +
                10.0 * std::cos(static_cast<double>(y) / 55.0);
      } else if (r < rp) {
        label = Label::Pupil;
        value = 22.0;
      } else if (r <= ri) {
        label = Label::Iris;
        const double angle = std::atan2(dy, dx) - pose.rotation;
        value = texture(angle, (r - rp) / (ri - rp));
      } else {
        label = Label::Sclera;
        value = 200.0 - 25.0 * std::min(1.0, r / half_width);
      }
      cap.labels(x, y) = label;
      cap.image(x, y) = clamp_pixel(noisy ? value + noise(rng) : value);
    }
  }

  // Mislabelled islands away from the iris; refinement is expected to drop them.
  std::uniform_real_distribution<double> ux(0.0, static_cast<double>(width - 1));
  std::uniform_real_distribution<double> uy(0.0, static_cast<double>(height - 1));
  std::uniform_int_distribution<int> blob_radius(2, 4);
  for (int b = 0; b < pose.stray_blobs; ++b) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      const double bx = ux(rng);
      const double by = uy(rng);
      if (std::hypot(bx - cx, by - cy) < ri + 12.0) continue;
      const int rad = blob_radius(rng);
      const auto x0 = static_cast<std::ptrdiff_t>(bx);
      const auto y0 = static_cast<std::ptrdiff_t>(by);
      for (std::ptrdiff_t y = y0 - rad; y <= y0 + rad; ++y) {
        for (std::ptrdiff_t x = x0 - rad; x <= x0 + rad; ++x) {
          if (x < 0 || y < 0 || x >= static_cast<std::ptrdiff_t>(width) ||
              y >= static_cast<std::ptrdiff_t>(height))
            continue;
          if ((x - x0) * (x - x0) + (y - y0) * (y - y0) > rad * rad) continue;
          cap.labels(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = Label::Iris;
        }
      }
      break;
    }
  }
  return cap;
}

void write_synthetic_dataset(const std::filesystem::path& root, const SyntheticDatasetSpec& spec,
                             std::size_t workers) {
  namespace fs = std::filesystem;
  std::vector<std::string> ids;
  std::vector<SyntheticTexture> textures;
  std::vector<double> iris_radii;
  for (std::size_t i = 0; i < spec.identities; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "S_%03zu", i);
    ids.emplace_back(name);
    textures.push_back(make_identity_texture(mix_seed(spec.seed, i)));
    std::mt19937_64 rng(mix_seed(spec.seed ^ 0x1d, i));
    iris_radii.push_back(std::uniform_real_distribution<double>(66.0, 84.0)(rng));
    fs::create_directories(root / "images" / name);
    fs::create_directories(root / "labels" / name);
  }

  const std::size_t total = spec.identities * spec.frames_per_identity;
  detail::parallel_for(total, workers, [&](std::size_t item) {
    const std::size_t id = item / spec.frames_per_identity;
    const std::size_t frame = item % spec.frames_per_identity;
    const std::uint64_t frame_seed = mix_seed(mix_seed(spec.seed, id), frame + 1);
    std::mt19937_64 rng(frame_seed);
    EyePose pose = random_pose(rng, spec.width, spec.height);
    pose.iris_radius = iris_radii[id] + 0.8 * std::normal_distribution<double>(0.0, 1.0)(rng);
    pose.pupil_radius = std::min(pose.pupil_radius, 0.55 * pose.iris_radius);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double blink = unit(rng);
    if (blink < spec.blink_probability) {
      pose.upper_lid = -pose.lower_lid - 0.1;  // fully closed
    } else if (blink < 2.0 * spec.blink_probability) {
      pose.upper_lid = -0.4 + 0.6 * unit(rng);  // half closed
    }

    const EyeCapture cap = render_eye(textures[id], pose, frame_seed, spec.width, spec.height);
    GrayImage raw(spec.width, spec.height);
    for (std::size_t k = 0; k < raw.size(); ++k)
      raw.pixels()[k] = static_cast<std::uint8_t>(cap.labels.pixels()[k]);
    const std::string file = std::to_string(frame) + ".png";
    write_png_gray8(root / "images" / ids[id] / file, cap.image, 1);
    write_png_gray8(root / "labels" / ids[id] / file, raw, 1);
  });
}

}  // namespace hmdiris
