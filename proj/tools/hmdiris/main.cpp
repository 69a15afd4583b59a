// hmdiris: prepare / verify / trust / bench / report over an eye-image dataset.
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hmdiris/error.hpp"
#include "hmdiris/pipeline.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitDataset = 2;

struct Overrides {
  std::string config;
  std::string dataset;
  std::string out;
  std::vector<double> imr_thresholds;
  std::vector<std::string> encoders;
  std::vector<std::string> distances;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::size_t> iterations;
  std::string trust_setting;
  std::optional<double> alpha;
  bool lockout = false;
  std::optional<double> lockout_threshold;
  bool trajectories = false;
};

hmdiris::RunConfig build_config(const Overrides& o) {
  using namespace hmdiris;
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_run_config(o.config);
  if (!o.dataset.empty()) cfg.dataset_root = o.dataset;
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (!o.imr_thresholds.empty()) cfg.imr_thresholds = o.imr_thresholds;
  if (!o.encoders.empty() || !o.distances.empty()) {
    std::vector<Encoder> encoders{Encoder::LogGabor, Encoder::DCT, Encoder::CSBCA};
    std::vector<DistanceKind> distances{DistanceKind::HD, DistanceKind::SHD};
    if (!o.encoders.empty()) {
      encoders.clear();
      for (const auto& name : o.encoders) {
        const auto e = parse_encoder(name);
        if (!e) throw Error(ErrorCode::InvalidConfig, "unknown encoder '" + name + "'");
        encoders.push_back(*e);
      }
    }
    if (!o.distances.empty()) {
      distances.clear();
      for (const auto& name : o.distances) {
        const auto d = parse_distance(name);
        if (!d) throw Error(ErrorCode::InvalidConfig, "unknown distance '" + name + "'");
        distances.push_back(*d);
      }
    }
    cfg.settings = settings_product(encoders, distances);
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  if (o.iterations) cfg.bench_iterations = *o.iterations;
  if (!o.trust_setting.empty()) {
    const auto s = parse_setting(o.trust_setting);
    if (!s) throw Error(ErrorCode::InvalidConfig, "unknown setting '" + o.trust_setting + "'");
    cfg.trust.encoder = s->encoder;
    cfg.trust.distance = s->distance;
  }
  if (o.alpha) cfg.trust.alpha = *o.alpha;
  if (o.lockout) cfg.trust.lockout_enabled = true;
  if (o.lockout_threshold) {
    cfg.trust.lockout_enabled = true;
    cfg.trust.lockout_threshold = *o.lockout_threshold;
  }
  if (o.trajectories) cfg.trust.write_trajectories = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iris verification and continuous-authentication pipeline"};
  app.set_version_flag("--version", std::string(hmdiris::version()));
  app.require_subcommand(1);

  Overrides o;
  app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--dataset", o.dataset, "Dataset root (images/ and labels/)");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--imr-th", o.imr_thresholds, "IMR thresholds, comma separated")
      ->delimiter(',');
  app.add_option("--encoder", o.encoders, "Encoders: LG, DCT, CSBCA")->delimiter(',');
  app.add_option("--distance", o.distances, "Distances: HD, SHD")->delimiter(',');
  app.add_option("--seed", o.seed, "Seed for randomized diagnostics");
  app.add_option("--workers", o.workers, "Worker threads (0 = all cores)");
  app.add_option("--iterations", o.iterations, "Benchmark iterations");
  app.add_option("--trust-setting", o.trust_setting, "Matcher feeding the trust model, e.g. DCT-SHD");
  app.add_option("--alpha", o.alpha, "Trust penalty for quality-rejected frames");
  app.add_flag("--lockout", o.lockout, "Log the user out when trust drops below threshold");
  app.add_option("--lockout-th", o.lockout_threshold, "Lockout threshold (implies --lockout)");
  app.add_flag("--trajectories", o.trajectories, "Write per-session trust trajectories");

  auto* prepare = app.add_subcommand("prepare", "Refine masks, normalize and score quality");
  auto* verify = app.add_subcommand("verify", "Encode, match and evaluate every setting");
  auto* trust = app.add_subcommand("trust", "Simulate continuous authentication sessions");
  auto* bench = app.add_subcommand("bench", "Time encoders and matchers");
  auto* report = app.add_subcommand("report", "Summarize verification metrics");
  for (auto* sub : {prepare, verify, trust, bench, report}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const hmdiris::RunConfig cfg = build_config(o);
    if (prepare->parsed()) {
      hmdiris::cmd_prepare(cfg, std::cerr);
    } else if (verify->parsed()) {
      hmdiris::cmd_verify(cfg, std::cerr);
    } else if (trust->parsed()) {
      hmdiris::cmd_trust(cfg, std::cerr);
    } else if (bench->parsed()) {
      hmdiris::cmd_bench(cfg, std::cout);
    } else if (report->parsed()) {
      hmdiris::cmd_report(cfg, std::cout);
    }
  } catch (const hmdiris::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case hmdiris::ErrorCode::InvalidConfig:
      case hmdiris::ErrorCode::ParamMismatch:
        return kExitConfig;
      default:
        return kExitDataset;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataset;
  }
  return 0;
}
