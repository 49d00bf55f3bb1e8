#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "roadsense/bump.hpp"
#include "roadsense/error.hpp"
#include "roadsense/roughness.hpp"
#include "roadsense/signal.hpp"

namespace roadsense {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr const char* kConfigEnvVar = "ROADSENSE_CONFIG";

struct AggregateConfig {
  double radius_m = 15.0;
  std::size_t min_trips = 2;
};

/// Every tunable of the pipeline. Defaults are the values used when no
/// config file is given.
struct PipelineConfig {
  double sample_rate_hz = 50.0;
  std::size_t segment_overlap = 0;
  double gap_reset_periods = 3.0;  // a sample gap longer than this re-seeds the filter
  std::int64_t max_gps_gap_ms = 10000;
  RoughnessConfig roughness;
  BumpConfig bump;
  AggregateConfig aggregate;

  void validate() const {
    make_sample_rate(sample_rate_hz);
    if (segment_overlap >= kSegmentLength) {
      throw Error(ErrorCode::configuration, "segment overlap must be smaller than the window");
    }
    if (!(gap_reset_periods > 0.0)) throw Error(ErrorCode::configuration, "gap_reset_periods must be positive");
    if (max_gps_gap_ms < 0) throw Error(ErrorCode::configuration, "max_gps_gap_ms must be non-negative");
    if (!(aggregate.radius_m > 0.0)) throw Error(ErrorCode::configuration, "cluster radius must be positive");
    if (aggregate.min_trips < 1) throw Error(ErrorCode::configuration, "min_trips must be at least 1");
    roughness.validate();
    bump.validate();
  }
};

namespace detail {

using nlohmann::json;

// Reads `key` from `obj` into `out` when present; rejects keys not in `known`.
template <typename T>
void read_key(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end()) {
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::configuration, std::string("bad value for '") + key + "': " + e.what());
    }
  }
}

inline void reject_unknown(const json& obj, std::initializer_list<const char*> known, const char* where) {
  if (!obj.is_object()) throw Error(ErrorCode::configuration, std::string(where) + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* name : known) ok = ok || k == name;
    if (!ok) throw Error(ErrorCode::configuration, "unknown key '" + k + "' in " + where);
  }
}

inline PeakPolicy parse_peak_policy(const std::string& s) {
  if (s == "strict") return PeakPolicy::strict;
  if (s == "plateau_left") return PeakPolicy::plateau_left;
  throw Error(ErrorCode::configuration, "peak_policy must be 'strict' or 'plateau_left'");
}

}  // namespace detail

/// Parses a config document (JSON, // comments allowed). Missing keys keep
/// their defaults; unknown keys are rejected.
inline PipelineConfig parse_config(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::configuration, std::string("config is not valid JSON: ") + e.what());
  }
  detail::reject_unknown(doc, {"schema_version", "sample_rate_hz", "segment", "filter", "roughness", "bump",
                               "geo", "aggregate"},
                         "config");
  int version = kConfigSchemaVersion;
  detail::read_key(doc, "schema_version", version);
  if (version != kConfigSchemaVersion) {
    throw Error(ErrorCode::configuration, "unsupported config schema version " + std::to_string(version));
  }

  PipelineConfig cfg;
  detail::read_key(doc, "sample_rate_hz", cfg.sample_rate_hz);

  if (auto it = doc.find("segment"); it != doc.end()) {
    detail::reject_unknown(*it, {"length", "overlap"}, "segment");
    std::size_t length = kSegmentLength;
    detail::read_key(*it, "length", length);
    if (length != kSegmentLength) throw Error(ErrorCode::configuration, "segment length is fixed at 32");
    detail::read_key(*it, "overlap", cfg.segment_overlap);
  }
  if (auto it = doc.find("filter"); it != doc.end()) {
    detail::reject_unknown(*it, {"gap_reset_periods"}, "filter");
    detail::read_key(*it, "gap_reset_periods", cfg.gap_reset_periods);
  }
  if (auto it = doc.find("roughness"); it != doc.end()) {
    detail::reject_unknown(*it, {"lambda", "taps_l", "alpha_levels", "thresholds", "hold_off_segments",
                                 "sigma_normalization"},
                           "roughness");
    auto& r = cfg.roughness;
    detail::read_key(*it, "lambda", r.lambda);
    detail::read_key(*it, "taps_l", r.taps);
    detail::read_key(*it, "alpha_levels", r.alpha_levels);
    detail::read_key(*it, "thresholds", r.thresholds_per_tap);
    detail::read_key(*it, "hold_off_segments", r.hold_off_segments);
    detail::read_key(*it, "sigma_normalization", r.sigma_normalization);
  }
  if (auto it = doc.find("bump"); it != doc.end()) {
    detail::reject_unknown(*it, {"beta_min", "min_speed", "allow_unknown_speed", "merge_window_ms",
                                 "z_threshold", "peak_policy"},
                           "bump");
    auto& b = cfg.bump;
    detail::read_key(*it, "beta_min", b.beta_min);
    detail::read_key(*it, "min_speed", b.min_speed);
    detail::read_key(*it, "allow_unknown_speed", b.allow_unknown_speed);
    detail::read_key(*it, "merge_window_ms", b.merge_window_ms);
    detail::read_key(*it, "z_threshold", b.z_threshold);
    std::string policy = "strict";
    detail::read_key(*it, "peak_policy", policy);
    b.peak_policy = detail::parse_peak_policy(policy);
  }
  if (auto it = doc.find("geo"); it != doc.end()) {
    detail::reject_unknown(*it, {"max_gap_ms"}, "geo");
    detail::read_key(*it, "max_gap_ms", cfg.max_gps_gap_ms);
  }
  if (auto it = doc.find("aggregate"); it != doc.end()) {
    detail::reject_unknown(*it, {"radius_m", "min_trips"}, "aggregate");
    detail::read_key(*it, "radius_m", cfg.aggregate.radius_m);
    detail::read_key(*it, "min_trips", cfg.aggregate.min_trips);
  }
  cfg.validate();
  return cfg;
}

inline PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::configuration, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Explicit path wins, then $ROADSENSE_CONFIG, then built-in defaults.
inline PipelineConfig resolve_config(const std::string& explicit_path) {
  if (!explicit_path.empty()) return load_config(explicit_path);
  if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') return load_config(env);
  PipelineConfig cfg;
  cfg.validate();
  return cfg;
}

}  // namespace roadsense
