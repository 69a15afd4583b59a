#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hmdiris/csv.hpp"
#include "hmdiris/error.hpp"
#include "hmdiris/pipeline.hpp"
#include "json.hpp"

#ifndef HMDIRIS_VERSION
#define HMDIRIS_VERSION "0.0.0"
#endif

namespace hmdiris {

using nlohmann::json;

std::string_view version() noexcept { return HMDIRIS_VERSION; }

std::string_view distance_name(DistanceKind kind) noexcept {
  return kind == DistanceKind::HD ? "HD" : "SHD";
}

std::optional<DistanceKind> parse_distance(std::string_view name) noexcept {
  if (name == "HD") return DistanceKind::HD;
  if (name == "SHD") return DistanceKind::SHD;
  return std::nullopt;
}

std::string Setting::name() const {
  return std::string(encoder_name(encoder)) + "-" + std::string(distance_name(distance));
}

std::optional<Setting> parse_setting(std::string_view name) noexcept {
  const auto dash = name.rfind('-');
  if (dash == std::string_view::npos) return std::nullopt;
  const auto enc = parse_encoder(name.substr(0, dash));
  const auto dist = parse_distance(name.substr(dash + 1));
  if (!enc || !dist) return std::nullopt;
  return Setting{*enc, *dist};
}

std::vector<Setting> default_settings() {
  return {{Encoder::LogGabor, DistanceKind::HD},
          {Encoder::LogGabor, DistanceKind::SHD},
          {Encoder::DCT, DistanceKind::HD},
          {Encoder::DCT, DistanceKind::SHD},
          {Encoder::CSBCA, DistanceKind::HD}};
}

std::vector<Setting> settings_product(const std::vector<Encoder>& encoders,
                                      const std::vector<DistanceKind>& distances) {
  std::vector<Setting> out;
  for (Encoder e : encoders)
    for (DistanceKind d : distances) {
      const Setting s{e, d};
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
  return out;
}

std::string threshold_label(double threshold) {
  std::string s = format_fixed(threshold, 4);
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

void validate(const RunConfig& config) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (config.settings.empty()) fail("at least one encoder/distance setting is required");
  auto check_thresholds = [&](const std::vector<double>& ts, const char* what) {
    for (double t : ts)
      if (!(t >= 0.0 && t <= 1.0)) fail(std::string(what) + " must lie in [0, 1]");
  };
  if (config.imr_thresholds.empty()) fail("imr_thresholds must not be empty");
  check_thresholds(config.imr_thresholds, "imr_thresholds");
  check_thresholds(config.gap_thresholds, "gap_thresholds");
  if (config.n_ref == 0) fail("n_ref must be positive");
  if (config.angular_size < 2 || config.radial_size < 1) fail("normalized_dims too small");
  if (config.match.max_shift < 0) fail("max_shift must be non-negative");
  if (config.match.min_overlap == 0) fail("min_overlap must be at least 1");
  if (config.bench_iterations == 0) fail("bench_iterations must be positive");
  if (!(config.trust.alpha > 0.0)) fail("trust.alpha must be positive");
  if (config.trust.lockout_threshold &&
      !(*config.trust.lockout_threshold >= -1.0 && *config.trust.lockout_threshold <= 1.0))
    fail("trust.lockout_threshold must lie in [-1, 1]");
  if (!(config.trust.fallback_threshold >= 0.0 && config.trust.fallback_threshold <= 1.0))
    fail("trust.fallback_threshold must lie in [0, 1]");
  for (const Setting& s : config.settings)
    code_shape(s.encoder, config.encoder_params, config.angular_size, config.radial_size);
}

namespace {

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorCode::InvalidConfig, msg);
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) config_error(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      config_error("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read_into(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(std::string("bad value for '") + key + "': " + e.what());
  }
}

Encoder encoder_from(const json& j) {
  const auto name = j.get<std::string>();
  const auto e = parse_encoder(name);
  if (!e) config_error("unknown encoder '" + name + "'");
  return *e;
}

DistanceKind distance_from(const json& j) {
  const auto name = j.get<std::string>();
  const auto d = parse_distance(name);
  if (!d) config_error("unknown distance kind '" + name + "'");
  return *d;
}

}  // namespace

RunConfig run_config_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(doc,
             {"dataset_root", "output_dir", "settings", "encoders", "distance_kinds",
              "imr_thresholds", "gap_thresholds", "n_ref", "n_skip", "normalized_dims",
              "encoder_params", "match", "trust", "export_coarse", "seed", "workers",
              "bench_iterations"},
             "config");

  RunConfig cfg;
  try {
    std::string path;
    if (doc.contains("dataset_root")) {
      read_into(doc, "dataset_root", path);
      cfg.dataset_root = path;
    }
    if (doc.contains("output_dir")) {
      read_into(doc, "output_dir", path);
      cfg.output_dir = path;
    }
    if (doc.contains("settings")) {
      if (doc.contains("encoders") || doc.contains("distance_kinds"))
        config_error("use either 'settings' or 'encoders'/'distance_kinds', not both");
      cfg.settings.clear();
      for (const auto& item : doc.at("settings")) {
        const auto name = item.get<std::string>();
        const auto s = parse_setting(name);
        if (!s) config_error("unknown setting '" + name + "'");
        if (std::find(cfg.settings.begin(), cfg.settings.end(), *s) == cfg.settings.end())
          cfg.settings.push_back(*s);
      }
    } else if (doc.contains("encoders") || doc.contains("distance_kinds")) {
      std::vector<Encoder> encoders{Encoder::LogGabor, Encoder::DCT, Encoder::CSBCA};
      std::vector<DistanceKind> distances{DistanceKind::HD, DistanceKind::SHD};
      if (doc.contains("encoders")) {
        encoders.clear();
        for (const auto& item : doc.at("encoders")) encoders.push_back(encoder_from(item));
      }
      if (doc.contains("distance_kinds")) {
        distances.clear();
        for (const auto& item : doc.at("distance_kinds")) distances.push_back(distance_from(item));
      }
      cfg.settings = settings_product(encoders, distances);
    }
    read_into(doc, "imr_thresholds", cfg.imr_thresholds);
    read_into(doc, "gap_thresholds", cfg.gap_thresholds);
    read_into(doc, "n_ref", cfg.n_ref);
    read_into(doc, "n_skip", cfg.n_skip);
    if (doc.contains("normalized_dims")) {
      const auto& dims = doc.at("normalized_dims");
      check_keys(dims, {"angular", "radial"}, "normalized_dims");
      read_into(dims, "angular", cfg.angular_size);
      read_into(dims, "radial", cfg.radial_size);
    }
    if (doc.contains("encoder_params")) {
      const auto& ep = doc.at("encoder_params");
      check_keys(ep, {"log_gabor", "dct", "csbca"}, "encoder_params");
      if (ep.contains("log_gabor")) {
        const auto& p = ep.at("log_gabor");
        check_keys(p, {"radial_bands", "center_wavelength", "sigma_over_f", "magnitude_floor"},
                   "encoder_params.log_gabor");
        auto& lg = cfg.encoder_params.log_gabor;
        read_into(p, "radial_bands", lg.radial_bands);
        read_into(p, "center_wavelength", lg.center_wavelength);
        read_into(p, "sigma_over_f", lg.sigma_over_f);
        read_into(p, "magnitude_floor", lg.magnitude_floor);
      }
      if (ep.contains("dct")) {
        const auto& p = ep.at("dct");
        check_keys(p, {"patch_width", "patch_height", "overlap", "coeffs_kept"},
                   "encoder_params.dct");
        auto& d = cfg.encoder_params.dct;
        read_into(p, "patch_width", d.patch_width);
        read_into(p, "patch_height", d.patch_height);
        read_into(p, "overlap", d.overlap);
        read_into(p, "coeffs_kept", d.coeffs_kept);
      }
      if (ep.contains("csbca")) {
        const auto& p = ep.at("csbca");
        check_keys(p, {"cell_width", "cell_height", "group_size"}, "encoder_params.csbca");
        auto& c = cfg.encoder_params.csbca;
        read_into(p, "cell_width", c.cell_width);
        read_into(p, "cell_height", c.cell_height);
        read_into(p, "group_size", c.group_size);
      }
    }
    if (doc.contains("match")) {
      const auto& m = doc.at("match");
      check_keys(m, {"max_shift", "min_overlap"}, "match");
      read_into(m, "max_shift", cfg.match.max_shift);
      read_into(m, "min_overlap", cfg.match.min_overlap);
    }
    if (doc.contains("trust")) {
      const auto& t = doc.at("trust");
      check_keys(t,
                 {"encoder", "distance", "alpha", "lockout_enabled", "lockout_threshold",
                  "fallback_threshold", "write_trajectories"},
                 "trust");
      if (t.contains("encoder")) cfg.trust.encoder = encoder_from(t.at("encoder"));
      if (t.contains("distance")) cfg.trust.distance = distance_from(t.at("distance"));
      read_into(t, "alpha", cfg.trust.alpha);
      read_into(t, "lockout_enabled", cfg.trust.lockout_enabled);
      if (t.contains("lockout_threshold") && !t.at("lockout_threshold").is_null()) {
        double v = 0.0;
        read_into(t, "lockout_threshold", v);
        cfg.trust.lockout_threshold = v;
      }
      read_into(t, "fallback_threshold", cfg.trust.fallback_threshold);
      read_into(t, "write_trajectories", cfg.trust.write_trajectories);
    }
    read_into(doc, "export_coarse", cfg.export_coarse);
    read_into(doc, "seed", cfg.seed);
    read_into(doc, "workers", cfg.workers);
    read_into(doc, "bench_iterations", cfg.bench_iterations);
  } catch (const json::exception& e) {
    config_error(std::string("bad config value: ") + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return run_config_from_json(buf.str());
}

std::string run_config_to_json(const RunConfig& cfg) {
  json doc;
  doc["dataset_root"] = cfg.dataset_root.generic_string();
  doc["output_dir"] = cfg.output_dir.generic_string();
  json settings = json::array();
  for (const Setting& s : cfg.settings) settings.push_back(s.name());
  doc["settings"] = settings;
  doc["imr_thresholds"] = cfg.imr_thresholds;
  doc["gap_thresholds"] = cfg.gap_thresholds;
  doc["n_ref"] = cfg.n_ref;
  doc["n_skip"] = cfg.n_skip;
  doc["normalized_dims"] = {{"angular", cfg.angular_size}, {"radial", cfg.radial_size}};
  const auto& lg = cfg.encoder_params.log_gabor;
  const auto& dct = cfg.encoder_params.dct;
  const auto& cs = cfg.encoder_params.csbca;
  doc["encoder_params"] = {
      {"log_gabor",
       {{"radial_bands", lg.radial_bands},
        {"center_wavelength", lg.center_wavelength},
        {"sigma_over_f", lg.sigma_over_f},
        {"magnitude_floor", lg.magnitude_floor}}},
      {"dct",
       {{"patch_width", dct.patch_width},
        {"patch_height", dct.patch_height},
        {"overlap", dct.overlap},
        {"coeffs_kept", dct.coeffs_kept}}},
      {"csbca",
       {{"cell_width", cs.cell_width},
        {"cell_height", cs.cell_height},
        {"group_size", cs.group_size}}}};
  doc["match"] = {{"max_shift", cfg.match.max_shift}, {"min_overlap", cfg.match.min_overlap}};
  json trust = {{"encoder", std::string(encoder_name(cfg.trust.encoder))},
                {"distance", std::string(distance_name(cfg.trust.distance))},
                {"alpha", cfg.trust.alpha},
                {"lockout_enabled", cfg.trust.lockout_enabled},
                {"fallback_threshold", cfg.trust.fallback_threshold},
                {"write_trajectories", cfg.trust.write_trajectories}};
  trust["lockout_threshold"] =
      cfg.trust.lockout_threshold ? json(*cfg.trust.lockout_threshold) : json(nullptr);
  doc["trust"] = trust;
  doc["export_coarse"] = cfg.export_coarse;
  doc["seed"] = cfg.seed;
  doc["workers"] = cfg.workers;
  doc["bench_iterations"] = cfg.bench_iterations;
  return doc.dump(2);
}

std::filesystem::path OutputLayout::texture_png(const std::string& id, std::size_t frame) const {
  return prepared() / "normalized" / id / (std::to_string(frame) + ".png");
}

std::filesystem::path OutputLayout::mask_png(const std::string& id, std::size_t frame) const {
  return prepared() / "masks" / id / (std::to_string(frame) + ".png");
}

std::filesystem::path OutputLayout::coarse_png(const std::string& id, std::size_t frame) const {
  return prepared() / "coarse" / id / (std::to_string(frame) + ".png");
}

std::filesystem::path OutputLayout::template_file(Encoder e, const std::string& id,
                                                  std::size_t frame) const {
  return verify() / "templates" / std::string(encoder_name(e)) / id /
         (std::to_string(frame) + ".irc");
}

std::filesystem::path OutputLayout::setting_dir(const Setting& s, double imr_threshold) const {
  return verify() / s.name() / ("imr" + threshold_label(imr_threshold));
}

}  // namespace hmdiris
