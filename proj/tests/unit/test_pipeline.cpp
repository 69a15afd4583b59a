#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "hmdiris/csv.hpp"
#include "hmdiris/error.hpp"
#include "hmdiris/pipeline.hpp"
#include "hmdiris/png_io.hpp"
#include "hmdiris/synthetic.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace hmdiris;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no hmdiris::Error thrown";
  return ErrorCode::Io;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void make_dataset(const fs::path& root, std::size_t identities, std::size_t frames) {
  SyntheticDatasetSpec spec;
  spec.identities = identities;
  spec.frames_per_identity = frames;
  spec.width = 320;
  spec.height = 240;
  spec.seed = 5;
  spec.blink_probability = 0.0;
  write_synthetic_dataset(root, spec);
  // one closed eye
  write_png_gray8(root / "labels" / "S_000" / "17.png", GrayImage(320, 240, 0));
}

}  // namespace

TEST(RunConfig, DefaultsAndParsing) {
  const RunConfig d = run_config_from_json("{}");
  EXPECT_EQ(d.settings, default_settings());
  EXPECT_EQ(d.settings.size(), 5u);
  EXPECT_EQ(d.imr_thresholds, (std::vector<double>{0.0, 0.7}));

  const RunConfig c = run_config_from_json(R"({
    "dataset_root": "/data", "encoders": ["DCT"], "distance_kinds": ["HD", "SHD"],
    "imr_thresholds": [0.3], "normalized_dims": {"angular": 256, "radial": 32},
    "encoder_params": {"dct": {"patch_width": 8}}, "match": {"max_shift": 16},
    "trust": {"lockout_enabled": true, "lockout_threshold": 0.2, "encoder": "LG"},
    "seed": 99})");
  EXPECT_EQ(c.dataset_root, fs::path("/data"));
  ASSERT_EQ(c.settings.size(), 2u);
  EXPECT_EQ(c.settings[1].name(), "DCT-SHD");
  EXPECT_EQ(c.angular_size, 256u);
  EXPECT_EQ(c.encoder_params.dct.patch_width, 8u);
  EXPECT_EQ(c.match.max_shift, 16);
  EXPECT_TRUE(c.trust.lockout_enabled);
  EXPECT_EQ(c.trust.lockout_threshold, 0.2);
  EXPECT_EQ(c.trust.encoder, Encoder::LogGabor);
  EXPECT_EQ(c.seed, 99u);

  // serialisation round trip
  const RunConfig back = run_config_from_json(run_config_to_json(c));
  EXPECT_EQ(run_config_to_json(back), run_config_to_json(c));
}

TEST(RunConfig, RejectsBadInput) {
  EXPECT_EQ(code_of([] { run_config_from_json("{"); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { run_config_from_json(R"({"imr_threshold": [0.1]})"); }),
            ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { run_config_from_json(R"({"settings": ["LG-XD"]})"); }),
            ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { run_config_from_json(R"({"n_ref": "ten"})"); }),
            ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { run_config_from_json(R"({"match": {"shift": 3}})"); }),
            ErrorCode::InvalidConfig);
  RunConfig c;
  c.imr_thresholds = {1.5};
  EXPECT_EQ(code_of([&] { validate(c); }), ErrorCode::InvalidConfig);
  c = {};
  c.settings.clear();
  EXPECT_EQ(code_of([&] { validate(c); }), ErrorCode::InvalidConfig);
  c = {};
  c.encoder_params.dct.overlap = 0.3;
  EXPECT_EQ(code_of([&] { validate(c); }), ErrorCode::ParamMismatch);
}

TEST(RunConfig, Names) {
  EXPECT_EQ(threshold_label(0.0), "0.0");
  EXPECT_EQ(threshold_label(0.7), "0.7");
  EXPECT_EQ(threshold_label(0.75), "0.75");
  EXPECT_EQ(parse_setting("CSBCA-HD")->encoder, Encoder::CSBCA);
  EXPECT_FALSE(parse_setting("LGHD").has_value());
  EXPECT_EQ(settings_product({Encoder::LogGabor, Encoder::DCT}, {DistanceKind::SHD}).size(), 2u);
}

class PipelineRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testutil::TempDir("pipe");
    make_dataset(dir_->path() / "data", 3, 20);
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }

  static RunConfig config(const std::string& out) {
    RunConfig c;
    c.dataset_root = dir_->path() / "data";
    c.output_dir = dir_->path() / out;
    c.workers = 2;
    c.bench_iterations = 3;
    return c;
  }

  static testutil::TempDir* dir_;
};

testutil::TempDir* PipelineRun::dir_ = nullptr;

TEST_F(PipelineRun, EndToEnd) {
  std::ostringstream log;
  RunConfig cfg = config("run1");
  const PrepareSummary prep = cmd_prepare(cfg, log);
  ASSERT_EQ(prep.records.size(), 60u);
  EXPECT_EQ(prep.identities, 3u);
  EXPECT_GE(prep.failed, 1u);

  // every capture exactly once
  const auto records = read_metadata(OutputLayout{cfg.output_dir}.metadata_csv());
  std::set<std::string> ids;
  for (const auto& r : records) EXPECT_TRUE(ids.insert(r.capture_id()).second);
  EXPECT_EQ(ids.size(), 60u);
  const auto closed = std::find_if(records.begin(), records.end(),
                                   [](const CaptureRecord& r) { return r.capture_id() == "S_000/17"; });
  ASSERT_NE(closed, records.end());
  EXPECT_EQ(closed->imr, 0.0);
  EXPECT_EQ(closed->error, "NoIris");
  const OutputLayout layout{cfg.output_dir};
  EXPECT_FALSE(fs::exists(layout.texture_png("S_000", 17)));
  EXPECT_TRUE(fs::exists(layout.texture_png("S_001", 3)));
  EXPECT_TRUE(fs::exists(layout.mask_png("S_002", 19)));

  const VerifySummary ver = cmd_verify(cfg, log);
  EXPECT_EQ(ver.results.size(), 10u);
  std::size_t metric_files = 0;
  for (const auto& e : fs::recursive_directory_iterator(layout.verify()))
    metric_files += e.path().filename() == "metrics.json";
  EXPECT_EQ(metric_files, 10u);
  for (const auto& r : ver.results) {
    ASSERT_TRUE(r.metrics.has_value());
    EXPECT_GE(r.metrics->auc, 0.5) << r.setting.name();
  }

  // probes kept at 0.7 are a subset of those at 0.0; one genuine row per probe
  for (const Setting& s : cfg.settings) {
    const CsvTable lo = read_csv(layout.scores_csv(s, 0.0));
    const CsvTable hi = read_csv(layout.scores_csv(s, 0.7));
    std::set<std::string> lo_rows;
    for (const auto& row : lo.rows) lo_rows.insert(row[0] + "|" + row[1] + "|" + row[3]);
    for (const auto& row : hi.rows) EXPECT_TRUE(lo_rows.count(row[0] + "|" + row[1] + "|" + row[3]));
    EXPECT_LT(hi.rows.size(), lo.rows.size());
    EXPECT_EQ(lo.rows.size(), 3u * 3u * 5u);  // 5 probes per identity, 3 references
    std::size_t genuine = 0;
    for (const auto& row : lo.rows) genuine += row[lo.column("genuine_flag")] == "1";
    EXPECT_EQ(genuine, 15u);
  }

  const CsvTable gaps = read_csv(layout.gap_report_csv());
  ASSERT_EQ(gaps.rows.size(), 8u);
  EXPECT_EQ(gaps.rows[0][0], "0.0");
  EXPECT_EQ(gaps.rows[0][gaps.column("SG 0-1")], "12");
  EXPECT_EQ(gaps.rows[0][gaps.column("Max SG")], "0");

  const auto splits = nlohmann::json::parse(slurp(layout.splits_json()));
  ASSERT_EQ(splits["identities"].size(), 3u);
  EXPECT_EQ(splits["identities"][0]["probes"].size(), 5u);

  cfg.trust.lockout_enabled = true;
  cfg.trust.write_trajectories = true;
  const TrustSummary trust = cmd_trust(cfg, log);
  EXPECT_TRUE(trust.impostor_available);
  ASSERT_EQ(trust.rows.size(), 3u);
  const CsvTable report = read_csv(layout.trust_report_csv());
  EXPECT_EQ(report.header.size(), 1u + 4u + 4u);
  EXPECT_EQ(report.header[1], "Gen-IMR0.0");
  EXPECT_EQ(report.header[4], "Imp-IMR0.7");
  EXPECT_EQ(report.header[5], "Gen-lockout-ms-IMR0.0");
  EXPECT_TRUE(fs::exists(layout.trust() / "trajectories" / "S_001_Imp_IMR0.7.csv"));

  std::ostringstream table;
  cmd_report(cfg, table);
  EXPECT_NE(table.str().find("| EER |"), std::string::npos);
  EXPECT_NE(table.str().find("DCT-SHD"), std::string::npos);
  EXPECT_TRUE(fs::exists(layout.report_csv()));

  const BenchReport bench = cmd_bench(cfg, log);
  EXPECT_EQ(bench.timings.size(), 5u);
  ASSERT_EQ(bench.sizes.size(), 3u);
  EXPECT_EQ(bench.sizes[0].bits, 16384u);
  EXPECT_EQ(bench.sizes[1].bits, 2048u);
  EXPECT_TRUE(fs::exists(layout.bench_json()));

  const auto manifest = nlohmann::json::parse(slurp(layout.manifest_json()));
  EXPECT_EQ(manifest["tool_version"], std::string(version()));
  EXPECT_TRUE(manifest["stages"].contains("prepare"));
  EXPECT_TRUE(manifest["stages"].contains("verify"));
  EXPECT_TRUE(manifest["stages"].contains("trust"));
}

TEST_F(PipelineRun, DeterministicAcrossRunsAndWorkerCounts) {
  std::ostringstream log;
  RunConfig a = config("det_a");
  RunConfig b = config("det_b");
  a.workers = 1;
  b.workers = 3;
  a.settings = b.settings = {{Encoder::LogGabor, DistanceKind::SHD}, {Encoder::CSBCA, DistanceKind::HD}};
  for (const RunConfig* c : {&a, &b}) {
    cmd_prepare(*c, log);
    cmd_verify(*c, log);
  }
  const OutputLayout la{a.output_dir}, lb{b.output_dir};
  EXPECT_EQ(hash_tree(la.prepared()), hash_tree(lb.prepared()));
  EXPECT_EQ(hash_tree(la.verify()), hash_tree(lb.verify()));
  EXPECT_EQ(slurp(la.scores_csv(a.settings[0], 0.7)), slurp(lb.scores_csv(b.settings[0], 0.7)));
  // the manifest hash of the verify stage matches as well
  const auto ma = nlohmann::json::parse(slurp(la.manifest_json()));
  const auto mb = nlohmann::json::parse(slurp(lb.manifest_json()));
  EXPECT_EQ(ma["stages"]["verify"]["fnv1a64"], mb["stages"]["verify"]["fnv1a64"]);
}

TEST_F(PipelineRun, MissingInputs) {
  std::ostringstream log;
  RunConfig cfg = config("missing");
  EXPECT_EQ(code_of([&] { cmd_verify(cfg, log); }), ErrorCode::MissingPreparedData);
  EXPECT_EQ(code_of([&] { cmd_bench(cfg, log); }), ErrorCode::MissingPreparedData);
  cmd_prepare(cfg, log);
  EXPECT_EQ(code_of([&] { cmd_trust(cfg, log); }), ErrorCode::MissingScores);
  EXPECT_EQ(code_of([&] { cmd_report(cfg, log); }), ErrorCode::MissingScores);
  cfg.dataset_root.clear();
  EXPECT_EQ(code_of([&] { cmd_prepare(cfg, log); }), ErrorCode::InvalidConfig);
}

TEST(Pipeline, EmptyDatasetIsNotFound) {
  testutil::TempDir dir;
  fs::create_directories(dir.path() / "images");
  RunConfig cfg;
  cfg.dataset_root = dir.path();
  cfg.output_dir = dir.path() / "out";
  std::ostringstream log;
  EXPECT_EQ(code_of([&] { cmd_prepare(cfg, log); }), ErrorCode::DatasetNotFound);
  cfg.dataset_root = dir.path() / "nope";
  EXPECT_EQ(code_of([&] { cmd_prepare(cfg, log); }), ErrorCode::DatasetNotFound);
}

TEST(Pipeline, SingleIdentityGivesGenuineRowsOnly) {
  testutil::TempDir dir;
  make_dataset(dir.path() / "data", 1, 18);
  RunConfig cfg;
  cfg.dataset_root = dir.path() / "data";
  cfg.output_dir = dir.path() / "out";
  cfg.settings = {{Encoder::DCT, DistanceKind::SHD}};
  std::ostringstream log;
  cmd_prepare(cfg, log);
  const VerifySummary v = cmd_verify(cfg, log);
  for (const auto& r : v.results) EXPECT_FALSE(r.metrics.has_value());
  const TrustSummary t = cmd_trust(cfg, log);
  EXPECT_FALSE(t.impostor_available);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_TRUE(t.rows[0].impostor_pct_above.empty());
  EXPECT_NE(log.str().find("warning: only one identity"), std::string::npos);
  const CsvTable report = read_csv(OutputLayout{cfg.output_dir}.trust_report_csv());
  EXPECT_EQ(report.header.size(), 3u);
}

TEST(Pipeline, ShortSessionsAreExcluded) {
  testutil::TempDir dir;
  make_dataset(dir.path() / "data", 2, 18);
  for (int f = 10; f < 18; ++f) {
    fs::remove(dir.path() / "data" / "images" / "S_001" / (std::to_string(f) + ".png"));
    fs::remove(dir.path() / "data" / "labels" / "S_001" / (std::to_string(f) + ".png"));
  }
  RunConfig cfg;
  cfg.dataset_root = dir.path() / "data";
  cfg.output_dir = dir.path() / "out";
  cfg.settings = {{Encoder::DCT, DistanceKind::HD}};
  std::ostringstream log;
  cmd_prepare(cfg, log);
  const VerifySummary v = cmd_verify(cfg, log);
  ASSERT_EQ(v.excluded_identities.size(), 1u);
  EXPECT_EQ(v.excluded_identities[0], "S_001");
}
