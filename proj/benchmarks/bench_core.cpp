#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "hmdiris/iriscode.hpp"
#include "hmdiris/mask_ingest.hpp"
#include "hmdiris/matcher.hpp"
#include "hmdiris/normalization.hpp"
#include "hmdiris/synthetic.hpp"

using namespace hmdiris;

namespace {

struct Sample {
  EyeCapture capture;
  LabelMap refined;
  EyeGeometry geometry;
  UnrolledIris unrolled;
};

const Sample& sample(std::uint64_t seed) {
  static std::map<std::uint64_t, Sample> cache;
  auto it = cache.find(seed);
  if (it != cache.end()) return it->second;
  std::mt19937_64 rng(seed);
  Sample s;
  EyePose pose = random_pose(rng);
  pose.stray_blobs = 2;
  s.capture = render_eye(make_identity_texture(seed), pose, seed);
  s.refined = refine_labels(s.capture.labels);
  s.geometry = fit_eye_geometry(s.refined);
  s.unrolled = unroll(s.capture.image, s.refined, s.geometry, 512, 64);
  return cache.emplace(seed, std::move(s)).first->second;
}

void BM_RefineLabels(benchmark::State& state) {
  const Sample& s = sample(1);
  for (auto _ : state) benchmark::DoNotOptimize(refine_labels(s.capture.labels));
}
BENCHMARK(BM_RefineLabels)->Unit(benchmark::kMillisecond);

void BM_FitGeometry(benchmark::State& state) {
  const Sample& s = sample(1);
  for (auto _ : state) benchmark::DoNotOptimize(fit_eye_geometry(s.refined));
}
BENCHMARK(BM_FitGeometry)->Unit(benchmark::kMillisecond);

void BM_Unroll(benchmark::State& state) {
  const Sample& s = sample(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(unroll(s.capture.image, s.refined, s.geometry, 512, 64));
}
BENCHMARK(BM_Unroll)->Unit(benchmark::kMillisecond);

void BM_Encode(benchmark::State& state) {
  const auto enc = static_cast<Encoder>(state.range(0));
  const Sample& s = sample(1);
  for (auto _ : state) benchmark::DoNotOptimize(encode(enc, s.unrolled.iris, s.unrolled.mask));
  state.SetLabel(std::string(encoder_name(enc)));
}
BENCHMARK(BM_Encode)
    ->Arg(static_cast<int>(Encoder::LogGabor))
    ->Arg(static_cast<int>(Encoder::DCT))
    ->Arg(static_cast<int>(Encoder::CSBCA))
    ->Unit(benchmark::kMillisecond);

void BM_Match(benchmark::State& state) {
  const auto enc = static_cast<Encoder>(state.range(0));
  const bool shifted = state.range(1) != 0;
  const IrisCode a = encode(enc, sample(1).unrolled.iris, sample(1).unrolled.mask);
  const IrisCode b = encode(enc, sample(2).unrolled.iris, sample(2).unrolled.mask);
  for (auto _ : state) {
    benchmark::DoNotOptimize(shifted ? shifted_hamming(a, b) : hamming(a, b));
  }
  state.SetLabel(std::string(encoder_name(enc)) + (shifted ? "-SHD " : "-HD ") +
                 std::to_string(a.bit_count()) + " bits");
}
BENCHMARK(BM_Match)
    ->ArgsProduct({{static_cast<int>(Encoder::LogGabor), static_cast<int>(Encoder::DCT),
                    static_cast<int>(Encoder::CSBCA)},
                   {0, 1}})
    ->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
