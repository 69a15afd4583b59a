#include "hmdiris/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "hmdiris/csv.hpp"
#include "hmdiris/dataset.hpp"
#include "hmdiris/error.hpp"
#include "hmdiris/png_io.hpp"
#include "hmdiris/template_io.hpp"
#include "hmdiris/trustsim.hpp"
#include "json.hpp"
#include "parallel.hpp"

namespace hmdiris {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Non-finite values (the ROC sentinels) are not representable in JSON.
json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw Error(ErrorCode::MissingScores, "unexpected number in metrics file");
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

json read_json(const fs::path& path, ErrorCode missing) {
  std::ifstream in(path);
  if (!in) throw Error(missing, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(missing, path.string() + ": " + e.what());
  }
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void update_manifest(const RunConfig& cfg, const std::string& stage, const fs::path& stage_dir) {
  const OutputLayout layout{cfg.output_dir};
  json manifest = json::object();
  if (fs::exists(layout.manifest_json())) {
    std::ifstream in(layout.manifest_json());
    try {
      manifest = json::parse(in);
    } catch (const json::exception&) {
      manifest = json::object();
    }
  }
  manifest["tool_version"] = std::string(version());
  manifest["config"] = json::parse(run_config_to_json(cfg));
  manifest["stages"][stage] = {{"directory", fs::relative(stage_dir, cfg.output_dir).generic_string()},
                               {"fnv1a64", hex64(hash_tree(stage_dir))}};
  write_text(layout.manifest_json(), manifest.dump(2) + "\n");
}

ComparisonScore compare(const IrisCode& probe, const IrisCode& reference, DistanceKind kind,
                        const MatchOptions& match) {
  try {
    return kind == DistanceKind::HD ? hamming(probe, reference, match.min_overlap)
                                    : shifted_hamming(probe, reference, match);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientOverlap) throw;
    // Nothing comparable (e.g. a closed eye): scored as a complete mismatch.
    return ComparisonScore{1.0, 0.0, 0, 0, 0};
  }
}

struct Session {
  std::string id;
  std::vector<SessionEntry> entries;
  ProtocolSplit split;
};

std::vector<IdentitySession> group_sessions(const std::vector<CaptureRecord>& records) {
  std::vector<IdentitySession> sessions;
  std::map<std::string, std::size_t> index;
  for (const auto& r : records) {
    auto [it, inserted] = index.emplace(r.identity_id, sessions.size());
    if (inserted) sessions.push_back({r.identity_id, {}});
    sessions[it->second].captures.push_back({r.frame_index, r.imr});
  }
  for (auto& s : sessions)
    std::sort(s.captures.begin(), s.captures.end(),
              [](const SessionEntry& a, const SessionEntry& b) { return a.frame_index < b.frame_index; });
  return sessions;
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

double median_ms(std::vector<double>& samples) {
  const auto mid = samples.begin() + static_cast<std::ptrdiff_t>(samples.size() / 2);
  std::nth_element(samples.begin(), mid, samples.end());
  double m = *mid;
  if (samples.size() % 2 == 0) m = 0.5 * (m + *std::max_element(samples.begin(), mid));
  return m;
}

template <typename Fn>
double time_median_ms(std::size_t iterations, Fn&& fn) {
  std::vector<double> samples(iterations);
  for (auto& s : samples) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    s = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  return median_ms(samples);
}

}  // namespace

std::uint64_t hash_tree(const fs::path& dir) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&h](const char* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(data[i]);
      h *= 0x100000001b3ull;
    }
  };
  if (!fs::exists(dir)) return h;
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::vector<std::pair<std::string, fs::path>> named;
  for (const auto& f : files) named.emplace_back(fs::relative(f, dir).generic_string(), f);
  std::sort(named.begin(), named.end());
  std::vector<char> buf(1 << 16);
  for (const auto& [rel, path] : named) {
    feed(rel.data(), rel.size() + 1);  // include the terminator as a separator
    std::ifstream in(path, std::ios::binary);
    while (in) {
      in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
      feed(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  return h;
}

// metadata ------------------------------------------------------------------

namespace {
const std::vector<std::string> kMetadataHeader{
    "identity", "frame", "imr", "pupil_x", "pupil_y", "pupil_radius", "iris_radius",
    "box_min_x", "box_min_y", "box_max_x", "box_max_y", "error"};
}

void write_metadata(const fs::path& csv, const std::vector<CaptureRecord>& records) {
  fs::create_directories(csv.parent_path());
  CsvWriter out(csv);
  out.row(kMetadataHeader);
  for (const auto& r : records) {
    std::vector<std::string> row{r.identity_id, std::to_string(r.frame_index), format_double(r.imr)};
    if (r.geometry) {
      row.push_back(format_double(r.geometry->pupil_center.x));
      row.push_back(format_double(r.geometry->pupil_center.y));
      row.push_back(format_double(r.geometry->pupil_radius));
      row.push_back(format_double(r.geometry->iris_radius));
    } else {
      row.insert(row.end(), 4, "");
    }
    if (r.box) {
      row.push_back(std::to_string(r.box->min_x));
      row.push_back(std::to_string(r.box->min_y));
      row.push_back(std::to_string(r.box->max_x));
      row.push_back(std::to_string(r.box->max_y));
    } else {
      row.insert(row.end(), 4, "");
    }
    row.push_back(r.error);
    out.row(row);
  }
}

std::vector<CaptureRecord> read_metadata(const fs::path& csv) {
  if (!fs::exists(csv))
    throw Error(ErrorCode::MissingPreparedData, "no metadata at " + csv.string() + "; run prepare");
  CsvTable table;
  try {
    table = read_csv(csv);
  } catch (const Error& e) {
    throw Error(ErrorCode::MissingPreparedData, e.what());
  }
  std::vector<std::size_t> col;
  try {
    for (const auto& name : kMetadataHeader) col.push_back(table.column(name));
  } catch (const Error& e) {
    throw Error(ErrorCode::MissingPreparedData, std::string("malformed metadata: ") + e.what());
  }
  std::vector<CaptureRecord> records;
  records.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw Error(ErrorCode::MissingPreparedData, "malformed metadata row");
    CaptureRecord r;
    r.identity_id = row[col[0]];
    r.frame_index = static_cast<std::size_t>(parse_int(row[col[1]]));
    r.imr = parse_double(row[col[2]]);
    if (!row[col[3]].empty()) {
      r.geometry = EyeGeometry{{parse_double(row[col[3]]), parse_double(row[col[4]])},
                               parse_double(row[col[5]]),
                               parse_double(row[col[6]])};
    }
    if (!row[col[7]].empty()) {
      r.box = CoarseBox{static_cast<std::size_t>(parse_int(row[col[7]])),
                        static_cast<std::size_t>(parse_int(row[col[8]])),
                        static_cast<std::size_t>(parse_int(row[col[9]])),
                        static_cast<std::size_t>(parse_int(row[col[10]]))};
    }
    r.error = row[col[11]];
    records.push_back(std::move(r));
  }
  return records;
}

// prepare -------------------------------------------------------------------

PrepareSummary cmd_prepare(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  if (cfg.dataset_root.empty())
    throw Error(ErrorCode::InvalidConfig, "dataset_root is not set");
  const auto identities = scan_dataset(cfg.dataset_root);
  const OutputLayout layout{cfg.output_dir};

  std::vector<CaptureRef> refs;
  for (const auto& id : identities) {
    fs::create_directories(layout.texture_png(id.identity_id, 0).parent_path());
    fs::create_directories(layout.mask_png(id.identity_id, 0).parent_path());
    if (cfg.export_coarse) fs::create_directories(layout.coarse_png(id.identity_id, 0).parent_path());
    refs.insert(refs.end(), id.captures.begin(), id.captures.end());
  }

  std::vector<CaptureRecord> records(refs.size());
  detail::parallel_for(refs.size(), cfg.workers, [&](std::size_t i) {
    const CaptureRef& ref = refs[i];
    CaptureRecord& rec = records[i];
    rec.identity_id = ref.identity_id;
    rec.frame_index = ref.frame_index;
    // Stale outputs from an earlier run must not survive a failure now.
    fs::remove(layout.texture_png(ref.identity_id, ref.frame_index));
    fs::remove(layout.mask_png(ref.identity_id, ref.frame_index));
    try {
      EyeCapture cap = load_capture(ref.image_path, ref.label_path, ref.identity_id, ref.frame_index);
      cap.labels = refine_labels(cap.labels);
      const EyeGeometry geom = fit_eye_geometry(cap.labels);
      rec.geometry = geom;
      const CoarseCrop crop = coarse_crop(cap);
      rec.box = crop.box;
      const UnrolledIris u = unroll(cap, geom, cfg.angular_size, cfg.radial_size);
      rec.imr = compute_imr(u.mask).imr;
      write_png_gray8(layout.texture_png(ref.identity_id, ref.frame_index), to_gray8(u.iris));
      write_png_bits(layout.mask_png(ref.identity_id, ref.frame_index), u.mask.bits);
      if (cfg.export_coarse)
        write_png_gray8(layout.coarse_png(ref.identity_id, ref.frame_index), crop.image);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Io) throw;
      rec.imr = 0.0;
      rec.geometry.reset();
      rec.box.reset();
      rec.error = std::string(error_tag(e.code()));
    }
  });

  write_metadata(layout.metadata_csv(), records);

  PrepareSummary summary;
  summary.identities = identities.size();
  for (const auto& r : records) {
    if (!r.ok()) {
      ++summary.failed;
      log << "warning: " << r.capture_id() << ": " << r.error << "\n";
    }
  }
  summary.records = std::move(records);
  log << "prepared " << summary.records.size() << " captures from " << summary.identities
      << " identities (" << summary.failed << " failed)\n";
  update_manifest(cfg, "prepare", layout.prepared());
  return summary;
}

// verify --------------------------------------------------------------------

VerifySummary cmd_verify(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const OutputLayout layout{cfg.output_dir};
  const auto records = read_metadata(layout.metadata_csv());
  if (records.empty()) throw Error(ErrorCode::MissingPreparedData, "metadata table is empty");

  std::map<std::pair<std::string, std::size_t>, const CaptureRecord*> by_capture;
  for (const auto& r : records) by_capture[{r.identity_id, r.frame_index}] = &r;

  VerifySummary summary;
  std::vector<Session> sessions;
  for (const auto& s : group_sessions(records)) {
    try {
      sessions.push_back({s.identity_id, s.captures, split_session(s, cfg.n_ref, cfg.n_skip)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SessionTooShort) throw;
      summary.excluded_identities.push_back(s.identity_id);
      log << "warning: identity " << s.identity_id << " excluded: " << e.what() << "\n";
    }
  }
  if (sessions.empty())
    throw Error(ErrorCode::MissingPreparedData, "no identity has enough captures to split");

  // split manifest
  {
    json splits;
    splits["n_ref"] = cfg.n_ref;
    splits["n_skip"] = cfg.n_skip;
    json ids = json::array();
    auto frames = [](const std::vector<SessionEntry>& v) {
      json a = json::array();
      for (const auto& e : v) a.push_back(e.frame_index);
      return a;
    };
    for (const auto& s : sessions) {
      ids.push_back({{"identity", s.id},
                     {"reference_pool", frames(s.split.reference_pool)},
                     {"skipped", frames(s.split.skipped)},
                     {"probes", frames(s.split.probes)},
                     {"selected_reference", s.split.reference().frame_index},
                     {"selected_reference_imr", s.split.reference().imr}});
    }
    splits["identities"] = ids;
    splits["excluded"] = summary.excluded_identities;
    write_text(layout.splits_json(), splits.dump(2) + "\n");
  }

  // gap report
  {
    std::vector<double> ts = cfg.gap_thresholds;
    ts.insert(ts.end(), cfg.imr_thresholds.begin(), cfg.imr_thresholds.end());
    CsvWriter out(layout.gap_report_csv());
    std::vector<std::string> header{"imr_threshold"};
    for (const char* name : kGapBinNames) header.emplace_back(name);
    header.emplace_back("Max SG");
    header.emplace_back("leading_rejections");
    out.row(header);
    for (double t : sorted_unique(ts)) {
      GapHistogram total;
      for (const auto& s : sessions) total += filter_probes(s.split.probes, t).gaps;
      std::vector<std::string> row{threshold_label(t)};
      for (auto c : total.bins) row.push_back(std::to_string(c));
      row.push_back(std::to_string(total.max_sg));
      row.push_back(std::to_string(total.leading_rejections));
      out.row(row);
    }
  }

  // Captures to encode: every selected reference and every probe.
  struct Job {
    std::size_t session;
    std::size_t frame;
    const CaptureRecord* record;
  };
  std::vector<Job> jobs;
  std::vector<std::size_t> reference_job(sessions.size());
  std::vector<std::vector<std::size_t>> probe_jobs(sessions.size());
  for (std::size_t si = 0; si < sessions.size(); ++si) {
    const auto& s = sessions[si];
    reference_job[si] = jobs.size();
    jobs.push_back({si, s.split.reference().frame_index,
                    by_capture.at({s.id, s.split.reference().frame_index})});
    for (const auto& p : s.split.probes) {
      probe_jobs[si].push_back(jobs.size());
      jobs.push_back({si, p.frame_index, by_capture.at({s.id, p.frame_index})});
    }
  }

  std::vector<Encoder> encoders;
  for (const Setting& st : cfg.settings)
    if (std::find(encoders.begin(), encoders.end(), st.encoder) == encoders.end())
      encoders.push_back(st.encoder);
  for (Encoder e : encoders)
    for (const auto& s : sessions)
      fs::create_directories(layout.template_file(e, s.id, 0).parent_path());

  std::vector<std::vector<IrisCode>> codes(encoders.size(), std::vector<IrisCode>(jobs.size()));
  detail::parallel_for(jobs.size(), cfg.workers, [&](std::size_t j) {
    const Job& job = jobs[j];
    const std::string& id = sessions[job.session].id;
    std::optional<NormalizedIris> iris;
    std::optional<IrisMask> mask;
    if (job.record->ok()) {
      const auto tex_path = layout.texture_png(id, job.frame);
      const auto mask_path = layout.mask_png(id, job.frame);
      if (!fs::exists(tex_path) || !fs::exists(mask_path))
        throw Error(ErrorCode::MissingPreparedData, "missing normalized data for " + id + "/" +
                                                        std::to_string(job.frame));
      iris = from_gray8(read_png_gray8(tex_path));
      mask = IrisMask{read_png_raw_channel(mask_path)};
      if (iris->angular_size() != cfg.angular_size || iris->radial_size() != cfg.radial_size)
        throw Error(ErrorCode::MissingPreparedData,
                    "prepared data does not match normalized_dims; rerun prepare");
    }
    for (std::size_t e = 0; e < encoders.size(); ++e) {
      IrisCode code;
      if (iris) {
        code = encode(encoders[e], *iris, *mask, cfg.encoder_params);
      } else {
        const auto [rows, extent] =
            code_shape(encoders[e], cfg.encoder_params, cfg.angular_size, cfg.radial_size);
        code = IrisCode(encoders[e], rows, extent);  // empty mask
      }
      save_template(layout.template_file(encoders[e], id, job.frame), code);
      codes[e][j] = std::move(code);
    }
  });
  log << "encoded " << jobs.size() << " captures with " << encoders.size() << " encoder(s)\n";

  auto capture_id = [&](const Job& job) {
    return sessions[job.session].id + "/" + std::to_string(job.frame);
  };

  for (const Setting& setting : cfg.settings) {
    const std::size_t e =
        static_cast<std::size_t>(std::find(encoders.begin(), encoders.end(), setting.encoder) -
                                 encoders.begin());
    // scores[job][reference session], for probe jobs only
    std::vector<std::vector<ComparisonScore>> scores(jobs.size());
    std::vector<std::size_t> all_probes;
    for (const auto& pj : probe_jobs) all_probes.insert(all_probes.end(), pj.begin(), pj.end());
    detail::parallel_for(all_probes.size(), cfg.workers, [&](std::size_t k) {
      const std::size_t j = all_probes[k];
      auto& row = scores[j];
      row.resize(sessions.size());
      for (std::size_t r = 0; r < sessions.size(); ++r)
        row[r] = compare(codes[e][j], codes[e][reference_job[r]], setting.distance, cfg.match);
    });

    for (double t : cfg.imr_thresholds) {
      const fs::path dir = layout.setting_dir(setting, t);
      fs::create_directories(dir);
      ScoreSet set;
      {
        CsvWriter out(layout.scores_csv(setting, t));
        out.row({"probe_id", "reference_id", "encoder", "distance", "similarity", "shift_used",
                 "overlap_bits", "genuine_flag"});
        for (std::size_t si = 0; si < sessions.size(); ++si) {
          for (std::size_t j : probe_jobs[si]) {
            if (!(jobs[j].record->imr >= t)) continue;
            const std::string probe_id = capture_id(jobs[j]);
            for (std::size_t r = 0; r < sessions.size(); ++r) {
              const ComparisonScore& sc = scores[j][r];
              const bool genuine = r == si;
              (genuine ? set.genuine : set.impostor).push_back(sc.similarity);
              out.row({probe_id, capture_id(jobs[reference_job[r]]),
                       std::string(encoder_name(setting.encoder)), format_double(sc.distance),
                       format_double(sc.similarity), std::to_string(sc.shift_used),
                       std::to_string(sc.overlap_bits), genuine ? "1" : "0"});
            }
          }
        }
      }

      SettingResult result{setting, t, std::nullopt};
      json m{{"encoder", std::string(encoder_name(setting.encoder))},
             {"distance_kind", std::string(distance_name(setting.distance))},
             {"imr_threshold", t},
             {"n_genuine", set.genuine.size()},
             {"n_impostor", set.impostor.size()}};
      CsvWriter roc_out(layout.roc_csv(setting, t));
      roc_out.row({"threshold", "fmr", "fnmr"});
      if (!set.genuine.empty() && !set.impostor.empty()) {
        MetricsReport report = evaluate(set);
        m["eer"] = report.eer;
        m["eer_threshold"] = json_number(report.eer_threshold);
        m["fmr10"] = report.fmr10;
        m["auc"] = report.auc;
        for (const auto& p : report.roc_points)
          roc_out.row({format_double(p.threshold), format_double(p.fmr), format_double(p.fnmr)});
        result.metrics = std::move(report);
      } else {
        m["eer"] = nullptr;
        m["eer_threshold"] = nullptr;
        m["fmr10"] = nullptr;
        m["auc"] = nullptr;
        log << "warning: " << setting.name() << " at IMR " << threshold_label(t)
            << ": no " << (set.genuine.empty() ? "genuine" : "impostor")
            << " comparisons, metrics left empty\n";
      }
      write_text(layout.metrics_json(setting, t), m.dump(2) + "\n");
      if (result.metrics) {
        log << setting.name() << " IMR " << threshold_label(t) << ": EER "
            << format_fixed(result.metrics->eer, 4) << ", FMR10 "
            << format_fixed(result.metrics->fmr10, 4) << ", AUC "
            << format_fixed(result.metrics->auc, 4) << "\n";
      }
      summary.results.push_back(std::move(result));
    }
  }
  update_manifest(cfg, "verify", layout.verify());
  return summary;
}

// trust ---------------------------------------------------------------------

TrustSummary cmd_trust(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const OutputLayout layout{cfg.output_dir};
  const auto records = read_metadata(layout.metadata_csv());
  std::map<std::string, double> imr_of;
  for (const auto& r : records) imr_of[r.capture_id()] = r.imr;

  const json splits = read_json(layout.splits_json(), ErrorCode::MissingScores);
  struct TrustIdentity {
    std::string id;
    std::string reference;
    std::vector<std::string> probes;
  };
  std::vector<TrustIdentity> ids;
  try {
    for (const auto& item : splits.at("identities")) {
      TrustIdentity ti;
      ti.id = item.at("identity").get<std::string>();
      ti.reference = ti.id + "/" + std::to_string(item.at("selected_reference").get<std::size_t>());
      for (const auto& f : item.at("probes"))
        ti.probes.push_back(ti.id + "/" + std::to_string(f.get<std::size_t>()));
      ids.push_back(std::move(ti));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MissingScores, std::string("malformed splits file: ") + e.what());
  }

  const Setting setting{cfg.trust.encoder, cfg.trust.distance};
  TrustSummary summary;
  summary.impostor_available = ids.size() > 1;
  if (!summary.impostor_available)
    log << "warning: only one identity; impostor sessions cannot be formed\n";
  summary.rows.resize(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) summary.rows[i].identity_id = ids[i].id;

  const fs::path traj_dir = layout.trust() / "trajectories";
  if (cfg.trust.write_trajectories) fs::create_directories(traj_dir);

  for (double t : cfg.imr_thresholds) {
    const json metrics = read_json(layout.metrics_json(setting, t), ErrorCode::MissingScores);
    double T = cfg.trust.fallback_threshold;
    if (metrics.contains("eer_threshold") && !metrics.at("eer_threshold").is_null()) {
      T = std::clamp(number_from_json(metrics.at("eer_threshold")), 0.0, 1.0);
    } else {
      log << "warning: no EER threshold for " << setting.name() << " at IMR "
          << threshold_label(t) << "; using fallback T = " << format_double(T) << "\n";
    }
    summary.thresholds.push_back(T);

    const fs::path scores_path = layout.scores_csv(setting, t);
    if (!fs::exists(scores_path))
      throw Error(ErrorCode::MissingScores, "no scores at " + scores_path.string() + "; run verify");
    const CsvTable table = read_csv(scores_path);
    const std::size_t c_probe = table.column("probe_id");
    const std::size_t c_ref = table.column("reference_id");
    const std::size_t c_sim = table.column("similarity");
    std::unordered_map<std::string, double> score_of;
    score_of.reserve(table.rows.size());
    for (const auto& row : table.rows)
      score_of[row[c_probe] + '\n' + row[c_ref]] = parse_double(row[c_sim]);

    TrustConfig tc;
    tc.threshold = T;
    tc.alpha = cfg.trust.alpha;
    tc.imr_threshold = t;
    tc.lockout_enabled = cfg.trust.lockout_enabled;
    tc.lockout_threshold = cfg.trust.lockout_threshold;

    auto frames_for = [&](const std::vector<const std::string*>& probes, const std::string& ref) {
      std::vector<TrustFrame> frames;
      frames.reserve(probes.size());
      for (const std::string* p : probes) {
        const auto imr_it = imr_of.find(*p);
        if (imr_it == imr_of.end())
          throw Error(ErrorCode::MissingScores, "probe " + *p + " missing from metadata");
        TrustFrame f{imr_it->second, std::nullopt};
        if (f.imr >= t) {
          const auto it = score_of.find(*p + '\n' + ref);
          if (it == score_of.end())
            throw Error(ErrorCode::MissingScores, "no score for " + *p + " vs " + ref);
          f.cs = it->second;
        }
        frames.push_back(f);
      }
      return frames;
    };
    auto write_trajectory = [&](const SessionReport& rep, const std::vector<const std::string*>& probes) {
      const char* tag = rep.scenario == Scenario::Genuine ? "Gen" : "Imp";
      CsvWriter out(traj_dir / (rep.identity_id + "_" + tag + "_IMR" + threshold_label(t) + ".csv"));
      out.row({"frame_index", "probe_id", "tv"});
      for (std::size_t k = 0; k < rep.trajectory.size(); ++k)
        out.row({std::to_string(k), *probes[k], format_double(rep.trajectory[k])});
    };

    std::vector<SessionReport> genuine(ids.size()), impostor(ids.size());
    detail::parallel_for(ids.size(), cfg.workers, [&](std::size_t i) {
      std::vector<const std::string*> own;
      for (const auto& p : ids[i].probes) own.push_back(&p);
      genuine[i] = run_session(frames_for(own, ids[i].reference), tc, ids[i].id, Scenario::Genuine);
      if (cfg.trust.write_trajectories) write_trajectory(genuine[i], own);
      if (!summary.impostor_available) return;
      std::vector<const std::string*> others;
      for (std::size_t j = 0; j < ids.size(); ++j)
        if (j != i)
          for (const auto& p : ids[j].probes) others.push_back(&p);
      impostor[i] = run_session(frames_for(others, ids[i].reference), tc, ids[i].id, Scenario::Impostor);
      if (cfg.trust.write_trajectories) write_trajectory(impostor[i], others);
    });
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto& row = summary.rows[i];
      row.genuine_pct_below.push_back(genuine[i].pct_below_threshold);
      row.genuine_lockout.push_back(genuine[i].lockout_frame);
      if (summary.impostor_available) {
        row.impostor_pct_above.push_back(impostor[i].pct_above_threshold);
        row.impostor_lockout.push_back(impostor[i].lockout_frame);
      }
    }
  }

  // One SG is one frame at 5 ms.
  constexpr std::size_t kFrameMs = 5;
  {
    fs::create_directories(layout.trust());
    CsvWriter out(layout.trust_report_csv());
    std::vector<std::string> header{"identity"};
    for (double t : cfg.imr_thresholds) header.push_back("Gen-IMR" + threshold_label(t));
    if (summary.impostor_available)
      for (double t : cfg.imr_thresholds) header.push_back("Imp-IMR" + threshold_label(t));
    if (cfg.trust.lockout_enabled) {
      for (double t : cfg.imr_thresholds) header.push_back("Gen-lockout-ms-IMR" + threshold_label(t));
      if (summary.impostor_available)
        for (double t : cfg.imr_thresholds) header.push_back("Imp-lockout-ms-IMR" + threshold_label(t));
    }
    out.row(header);
    auto ms = [](const std::optional<std::size_t>& f) {
      return f ? std::to_string(*f * kFrameMs) : std::string();
    };
    for (const auto& row : summary.rows) {
      std::vector<std::string> fields{row.identity_id};
      for (double v : row.genuine_pct_below) fields.push_back(format_fixed(v, 2));
      for (double v : row.impostor_pct_above) fields.push_back(format_fixed(v, 2));
      if (cfg.trust.lockout_enabled) {
        for (const auto& f : row.genuine_lockout) fields.push_back(ms(f));
        for (const auto& f : row.impostor_lockout) fields.push_back(ms(f));
      }
      out.row(fields);
    }
  }
  {
    json th = json::object();
    th["setting"] = setting.name();
    json per = json::array();
    for (std::size_t k = 0; k < cfg.imr_thresholds.size(); ++k)
      per.push_back({{"imr_threshold", cfg.imr_thresholds[k]}, {"T", summary.thresholds[k]}});
    th["thresholds"] = per;
    write_text(layout.trust() / "thresholds.json", th.dump(2) + "\n");
  }
  log << "trust report for " << summary.rows.size() << " identities written to "
      << layout.trust_report_csv().string() << "\n";
  update_manifest(cfg, "trust", layout.trust());
  return summary;
}

// bench ---------------------------------------------------------------------

BenchReport cmd_bench(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const OutputLayout layout{cfg.output_dir};
  auto records = read_metadata(layout.metadata_csv());
  std::vector<const CaptureRecord*> usable;
  for (const auto& r : records)
    if (r.ok()) usable.push_back(&r);
  if (usable.empty()) throw Error(ErrorCode::MissingPreparedData, "no successfully prepared capture");
  std::stable_sort(usable.begin(), usable.end(),
                   [](const CaptureRecord* a, const CaptureRecord* b) { return a->imr > b->imr; });
  const CaptureRecord& first = *usable[0];
  const CaptureRecord& second = *usable[usable.size() > 1 ? 1 : 0];
  auto load = [&](const CaptureRecord& r) {
    return std::pair{from_gray8(read_png_gray8(layout.texture_png(r.identity_id, r.frame_index))),
                     IrisMask{read_png_raw_channel(layout.mask_png(r.identity_id, r.frame_index))}};
  };
  const auto [iris_a, mask_a] = load(first);
  const auto [iris_b, mask_b] = load(second);

  BenchReport report;
  report.iterations = cfg.bench_iterations;
  constexpr double kEncodeBudgetMs = 10.0;
  constexpr double kEncodeReferenceMs = 3.0;
  constexpr double kHdBudgetMs = 2.0;
  constexpr double kShdBudgetMs = 6.0;

  std::size_t sink = 0;
  const std::pair<Encoder, std::size_t> reference_sizes[] = {
      {Encoder::LogGabor, 915}, {Encoder::DCT, 1022}, {Encoder::CSBCA, 336}};
  for (const auto& [enc, ref_bytes] : reference_sizes) {
    const double ms = time_median_ms(cfg.bench_iterations, [&] {
      sink += encode(enc, iris_a, mask_a, cfg.encoder_params).mask_popcount();
    });
    report.timings.push_back({"encode " + std::string(encoder_name(enc)), ms, kEncodeBudgetMs,
                              kEncodeReferenceMs, ms < kEncodeBudgetMs});
    const IrisCode code = encode(enc, iris_a, mask_a, cfg.encoder_params);
    report.sizes.push_back({enc, code.bit_count(), template_size_bytes(code), ref_bytes});
  }

  const IrisCode a = encode(Encoder::LogGabor, iris_a, mask_a, cfg.encoder_params);
  const IrisCode b = encode(Encoder::LogGabor, iris_b, mask_b, cfg.encoder_params);
  const std::string bits = std::to_string(a.bit_count()) + "-bit";
  const double hd_ms = time_median_ms(cfg.bench_iterations, [&] {
    sink += compare(a, b, DistanceKind::HD, cfg.match).overlap_bits;
  });
  report.timings.push_back({"HD " + bits, hd_ms, kHdBudgetMs, kHdBudgetMs, hd_ms < kHdBudgetMs});
  const double shd_ms = time_median_ms(cfg.bench_iterations, [&] {
    sink += compare(a, b, DistanceKind::SHD, cfg.match).overlap_bits;
  });
  report.timings.push_back(
      {"SHD " + bits, shd_ms, kShdBudgetMs, kShdBudgetMs, shd_ms < kShdBudgetMs});

  json doc;
  doc["iterations"] = report.iterations;
  doc["capture"] = first.capture_id();
  json timings = json::array();
  for (const auto& t : report.timings) {
    timings.push_back({{"name", t.name},
                       {"median_ms", t.median_ms},
                       {"budget_ms", t.budget_ms},
                       {"reference_ms", t.reference_ms},
                       {"pass", t.pass}});
    log << t.name << ": median " << format_fixed(t.median_ms, 4) << " ms (budget "
        << format_double(t.budget_ms) << " ms, reference " << format_double(t.reference_ms)
        << " ms) " << (t.pass ? "PASS" : "FAIL") << "\n";
  }
  doc["timings"] = timings;
  json sizes = json::array();
  for (const auto& s : report.sizes) {
    sizes.push_back({{"encoder", std::string(encoder_name(s.encoder))},
                     {"bits", s.bits},
                     {"template_bytes", s.bytes},
                     {"reference_bytes", s.reference_bytes}});
    log << "template " << encoder_name(s.encoder) << ": " << s.bits << " bits, " << s.bytes
        << " bytes on disk (reference " << s.reference_bytes << " B)\n";
  }
  doc["template_sizes"] = sizes;
  doc["checksum"] = sink;  // keeps the timed work observable
  write_text(layout.bench_json(), doc.dump(2) + "\n");
  return report;
}

// report --------------------------------------------------------------------

void cmd_report(const RunConfig& cfg, std::ostream& out) {
  validate(cfg);
  const OutputLayout layout{cfg.output_dir};
  struct Cell {
    std::optional<double> eer, fmr10, auc, eer_threshold;
    std::size_t n_genuine = 0, n_impostor = 0;
  };
  std::vector<std::vector<Cell>> cells(cfg.imr_thresholds.size(),
                                       std::vector<Cell>(cfg.settings.size()));
  auto opt = [](const json& m, const char* key) -> std::optional<double> {
    if (!m.contains(key) || m.at(key).is_null()) return std::nullopt;
    return number_from_json(m.at(key));
  };
  for (std::size_t ti = 0; ti < cfg.imr_thresholds.size(); ++ti) {
    for (std::size_t si = 0; si < cfg.settings.size(); ++si) {
      const json m = read_json(layout.metrics_json(cfg.settings[si], cfg.imr_thresholds[ti]),
                               ErrorCode::MissingScores);
      Cell& c = cells[ti][si];
      c.eer = opt(m, "eer");
      c.fmr10 = opt(m, "fmr10");
      c.auc = opt(m, "auc");
      c.eer_threshold = opt(m, "eer_threshold");
      c.n_genuine = m.value("n_genuine", std::size_t{0});
      c.n_impostor = m.value("n_impostor", std::size_t{0});
    }
  }

  fs::create_directories(layout.report_csv().parent_path());
  {
    CsvWriter csv(layout.report_csv());
    csv.row({"setting", "imr_threshold", "eer", "fmr10", "auc", "eer_threshold", "n_genuine",
             "n_impostor"});
    auto f = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (std::size_t ti = 0; ti < cfg.imr_thresholds.size(); ++ti)
      for (std::size_t si = 0; si < cfg.settings.size(); ++si) {
        const Cell& c = cells[ti][si];
        csv.row({cfg.settings[si].name(), threshold_label(cfg.imr_thresholds[ti]), f(c.eer),
                 f(c.fmr10), f(c.auc), f(c.eer_threshold), std::to_string(c.n_genuine),
                 std::to_string(c.n_impostor)});
      }
  }

  auto f4 = [](const std::optional<double>& v) { return v ? format_fixed(*v, 4) : std::string("-"); };
  for (const char* metric : {"EER", "FMR10", "AUC"}) {
    out << "| " << metric << " |";
    for (const auto& s : cfg.settings) out << ' ' << s.name() << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < cfg.settings.size(); ++i) out << "---|";
    out << "\n";
    for (std::size_t ti = 0; ti < cfg.imr_thresholds.size(); ++ti) {
      out << "| IMR " << threshold_label(cfg.imr_thresholds[ti]) << " |";
      for (const Cell& c : cells[ti]) {
        const auto& v = metric[0] == 'E' ? c.eer : metric[0] == 'F' ? c.fmr10 : c.auc;
        out << ' ' << f4(v) << " |";
      }
      out << "\n";
    }
    out << "\n";
  }
}

}  // namespace hmdiris
