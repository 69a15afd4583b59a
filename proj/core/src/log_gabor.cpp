#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>

#include "encoders.hpp"
#include "hmdiris/error.hpp"

namespace hmdiris {
namespace {

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

ComplexBuffer make_buffer(std::size_t n) {
  return ComplexBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

// fftw_plan_* is not thread-safe; execution through the new-array interface
// is. Plans live for the life of the process.
PlanPair plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  auto in = make_buffer(n);
  auto out = make_buffer(n);
  const int len = static_cast<int>(n);
  PlanPair p{fftw_plan_dft_1d(len, in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE),
             fftw_plan_dft_1d(len, in.get(), out.get(), FFTW_BACKWARD, FFTW_ESTIMATE)};
  cache.emplace(n, p);
  return p;
}

// Analytic 1-D log-Gabor transfer function: zero at DC and for negative
// frequencies.
std::vector<double> log_gabor_spectrum(std::size_t n, const LogGaborParams& p) {
  std::vector<double> g(n, 0.0);
  const double f0 = 1.0 / p.center_wavelength;
  const double denom = 2.0 * std::log(p.sigma_over_f) * std::log(p.sigma_over_f);
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(n);
    const double l = std::log(f / f0);
    g[k] = std::exp(-(l * l) / denom);
  }
  return g;
}

}  // namespace

IrisCode encode_log_gabor(const NormalizedIris& iris, const IrisMask& mask,
                          const LogGaborParams& params) {
  detail::check_pair(iris, mask);
  EncoderParams all;
  all.log_gabor = params;
  const std::size_t n = iris.angular_size();
  const std::size_t radial = iris.radial_size();
  const auto [bands, extent] = code_shape(Encoder::LogGabor, all, n, radial);

  const auto gain = log_gabor_spectrum(n, params);
  const PlanPair plans = plans_for(n);
  auto time = make_buffer(n);
  auto freq = make_buffer(n);
  const double inv_n = 1.0 / static_cast<double>(n);

  // Largest possible |response| for 8-bit input is 255 * sum |h|.
  for (std::size_t k = 0; k < n; ++k) {
    freq[k][0] = gain[k];
    freq[k][1] = 0.0;
  }
  fftw_execute_dft(plans.backward, freq.get(), time.get());
  double l1 = 0.0;
  for (std::size_t k = 0; k < n; ++k) l1 += std::hypot(time[k][0], time[k][1]) * inv_n;
  const double floor = params.magnitude_floor * 255.0 * l1;

  IrisCode code(Encoder::LogGabor, bands, extent);
  std::vector<std::uint8_t> band_valid(n);
  for (std::size_t b = 0; b < bands; ++b) {
    const std::size_t r0 = b * radial / bands;
    const std::size_t r1 = (b + 1) * radial / bands;
    const double inv_rows = 1.0 / static_cast<double>(r1 - r0);

    std::fill(band_valid.begin(), band_valid.end(), 1);
    for (std::size_t i = 0; i < n; ++i) {
      time[i][0] = 0.0;
      time[i][1] = 0.0;
    }
    for (std::size_t r = r0; r < r1; ++r) {
      const auto tex = iris.texture.row(r);
      const auto m = mask.bits.row(r);
      for (std::size_t i = 0; i < n; ++i) {
        time[i][0] += tex[i];
        band_valid[i] &= m[i] != 0 ? 1 : 0;
      }
    }
    for (std::size_t i = 0; i < n; ++i) time[i][0] *= inv_rows;

    fftw_execute_dft(plans.forward, time.get(), freq.get());
    for (std::size_t k = 0; k < n; ++k) {
      freq[k][0] *= gain[k];
      freq[k][1] *= gain[k];
    }
    fftw_execute_dft(plans.backward, freq.get(), time.get());

    for (std::size_t i = 0; i < n; ++i) {
      const double re = time[i][0] * inv_n;
      const double im = time[i][1] * inv_n;
      const bool valid = band_valid[i] && std::hypot(re, im) > floor;
      code.set_code_bit(b, 2 * i, im > 0.0);
      code.set_code_bit(b, 2 * i + 1, re > 0.0);
      code.set_mask_bit(b, 2 * i, valid);
      code.set_mask_bit(b, 2 * i + 1, valid);
    }
  }
  return code;
}

}  // namespace hmdiris
