#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hmdiris/iriscode.hpp"
#include "hmdiris/mask_ingest.hpp"
#include "hmdiris/matcher.hpp"
#include "hmdiris/metrics.hpp"
#include "hmdiris/normalization.hpp"
#include "hmdiris/protocol.hpp"

namespace hmdiris {

std::string_view version() noexcept;

enum class DistanceKind : std::uint8_t { HD, SHD };

std::string_view distance_name(DistanceKind kind) noexcept;
std::optional<DistanceKind> parse_distance(std::string_view name) noexcept;

/// One evaluated (encoder, distance) combination, named like "DCT-SHD".
struct Setting {
  Encoder encoder = Encoder::DCT;
  DistanceKind distance = DistanceKind::SHD;

  std::string name() const;
  friend bool operator==(const Setting&, const Setting&) = default;
};

std::optional<Setting> parse_setting(std::string_view name) noexcept;

/// LG-HD, LG-SHD, DCT-HD, DCT-SHD, CSBCA-HD.
std::vector<Setting> default_settings();
std::vector<Setting> settings_product(const std::vector<Encoder>& encoders,
                                      const std::vector<DistanceKind>& distances);

/// Threshold label used in file names and column headings ("0.0", "0.7", "0.75").
std::string threshold_label(double threshold);

struct TrustSettings {
  Encoder encoder = Encoder::DCT;
  DistanceKind distance = DistanceKind::SHD;
  double alpha = 0.01;
  bool lockout_enabled = false;
  std::optional<double> lockout_threshold;
  // Used only when the verification run has no impostor scores to derive T from.
  double fallback_threshold = 0.5;
  bool write_trajectories = false;
};

struct RunConfig {
  std::filesystem::path dataset_root;
  std::filesystem::path output_dir = "hmdiris_out";
  std::vector<Setting> settings = default_settings();
  std::vector<double> imr_thresholds{0.0, 0.7};
  std::vector<double> gap_thresholds{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  std::size_t n_ref = kDefaultReferenceCount;
  std::size_t n_skip = kDefaultSkipCount;
  std::size_t angular_size = kDefaultAngularSize;
  std::size_t radial_size = kDefaultRadialSize;
  EncoderParams encoder_params;
  MatchOptions match;
  TrustSettings trust;
  bool export_coarse = false;
  std::uint64_t seed = 0;
  std::size_t workers = 0;  // 0 = one per hardware thread
  std::size_t bench_iterations = 1000;
};

/// Throws InvalidConfig (or ParamMismatch for encoder geometry).
void validate(const RunConfig& config);

/// JSON document with the RunConfig fields; unknown keys are rejected.
/// `encoders` + `distance_kinds` expand to their product unless `settings`
/// lists combinations explicitly.
RunConfig run_config_from_json(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_to_json(const RunConfig& config);

/// Output layout below RunConfig::output_dir.
struct OutputLayout {
  std::filesystem::path root;

  std::filesystem::path prepared() const { return root / "prepared"; }
  std::filesystem::path metadata_csv() const { return prepared() / "metadata.csv"; }
  std::filesystem::path texture_png(const std::string& id, std::size_t frame) const;
  std::filesystem::path mask_png(const std::string& id, std::size_t frame) const;
  std::filesystem::path coarse_png(const std::string& id, std::size_t frame) const;

  std::filesystem::path verify() const { return root / "verify"; }
  std::filesystem::path splits_json() const { return verify() / "splits.json"; }
  std::filesystem::path gap_report_csv() const { return verify() / "gap_report.csv"; }
  std::filesystem::path template_file(Encoder e, const std::string& id, std::size_t frame) const;
  std::filesystem::path setting_dir(const Setting& s, double imr_threshold) const;
  std::filesystem::path scores_csv(const Setting& s, double t) const {
    return setting_dir(s, t) / "scores.csv";
  }
  std::filesystem::path metrics_json(const Setting& s, double t) const {
    return setting_dir(s, t) / "metrics.json";
  }
  std::filesystem::path roc_csv(const Setting& s, double t) const {
    return setting_dir(s, t) / "roc.csv";
  }

  std::filesystem::path trust() const { return root / "trust"; }
  std::filesystem::path trust_report_csv() const { return trust() / "trust_report.csv"; }
  std::filesystem::path bench_json() const { return root / "bench" / "bench.json"; }
  std::filesystem::path report_csv() const { return root / "report" / "summary.csv"; }
  std::filesystem::path manifest_json() const { return root / "manifest.json"; }
};

/// One row of the prepare metadata table.
struct CaptureRecord {
  std::string identity_id;
  std::size_t frame_index = 0;
  double imr = 0.0;
  std::optional<EyeGeometry> geometry;
  std::optional<CoarseBox> box;
  std::string error;  // error tag, empty on success

  bool ok() const noexcept { return error.empty(); }
  std::string capture_id() const { return identity_id + "/" + std::to_string(frame_index); }
};

std::vector<CaptureRecord> read_metadata(const std::filesystem::path& csv);
void write_metadata(const std::filesystem::path& csv, const std::vector<CaptureRecord>& records);

struct PrepareSummary {
  std::vector<CaptureRecord> records;
  std::size_t failed = 0;
  std::size_t identities = 0;
};

struct SettingResult {
  Setting setting;
  double imr_threshold = 0.0;
  std::optional<MetricsReport> metrics;  // empty when a score set is empty
};

struct VerifySummary {
  std::vector<SettingResult> results;
  std::vector<std::string> excluded_identities;  // sessions too short to split
};

struct TrustRow {
  std::string identity_id;
  std::vector<double> genuine_pct_below;    // per imr threshold
  std::vector<double> impostor_pct_above;   // empty without other identities
  std::vector<std::optional<std::size_t>> genuine_lockout;
  std::vector<std::optional<std::size_t>> impostor_lockout;
};

struct TrustSummary {
  std::vector<double> thresholds;     // T per imr threshold
  std::vector<TrustRow> rows;
  bool impostor_available = true;
};

struct BenchEntry {
  std::string name;
  double median_ms = 0.0;
  double budget_ms = 0.0;
  double reference_ms = 0.0;
  bool pass = false;
};

struct TemplateSizeEntry {
  Encoder encoder = Encoder::LogGabor;
  std::size_t bits = 0;
  std::size_t bytes = 0;
  std::size_t reference_bytes = 0;
};

struct BenchReport {
  std::size_t iterations = 0;
  std::vector<BenchEntry> timings;
  std::vector<TemplateSizeEntry> sizes;
};

/// Every command logs progress and warnings to `log`.
PrepareSummary cmd_prepare(const RunConfig& config, std::ostream& log);
VerifySummary cmd_verify(const RunConfig& config, std::ostream& log);
TrustSummary cmd_trust(const RunConfig& config, std::ostream& log);
BenchReport cmd_bench(const RunConfig& config, std::ostream& log);
/// Collects the metrics of every configured setting into one table and
/// prints it to `out`.
void cmd_report(const RunConfig& config, std::ostream& out);

/// FNV-1a 64 over the relative paths and contents of every regular file
/// below `dir`, visited in sorted order.
std::uint64_t hash_tree(const std::filesystem::path& dir);

}  // namespace hmdiris
