#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "roadsense/error.hpp"
#include "roadsense/events.hpp"
#include "roadsense/geo.hpp"
#include "roadsense/signal.hpp"
#include "roadsense/trip_io.hpp"

namespace roadsense::synth {

struct RoughSpan {
  double start_s = 0.0;
  double end_s = 0.0;
  double sigma_g = 0.0;
};

struct BumpSpec {
  double t_s = 0.0;
  double height_g = 0.0;
  int width_samples = 6;
};

struct SpeedKnot {
  double t_s = 0.0;
  double mps = 0.0;
};

/// Declarative description of a synthetic ride. Accelerations are
/// gain * (gravity + noise + bumps) in device axes, with gravity along
/// `gravity_orientation`.
struct Scenario {
  std::string trip_id = "synthetic";
  double duration_s = 60.0;
  double sample_rate_hz = 50.0;
  std::array<double, 3> gravity_orientation{0.0, 0.0, 1.0};
  double device_gain = 1.0;
  double noise_sigma_g = 0.02;
  std::vector<RoughSpan> rough_segments;
  std::vector<BumpSpec> bumps;
  std::vector<SpeedKnot> speed_profile{{0.0, 5.0}};
  std::uint64_t rng_seed = 1;
  LatLon origin{1.3521, 103.8198};
  double heading_deg = 90.0;
  double gps_rate_hz = 1.0;
  double gps_accuracy_m = 5.0;

  void validate() const {
    const auto fail = [](const std::string& m) { throw Error(ErrorCode::scenario, m); };
    if (!(duration_s > 0.0)) fail("duration_s must be positive");
    if (!(sample_rate_hz > 0.0)) fail("sample_rate_hz must be positive");
    if (!(gps_rate_hz > 0.0)) fail("gps_rate_hz must be positive");
    if (!(device_gain > 0.0)) fail("device_gain must be positive");
    if (!(noise_sigma_g >= 0.0)) fail("noise_sigma_g must be non-negative");
    const double norm = std::hypot(gravity_orientation[0], gravity_orientation[1], gravity_orientation[2]);
    if (!(norm > 0.0) || !std::isfinite(norm)) fail("gravity_orientation must be a non-zero vector");
    for (const auto& r : rough_segments) {
      if (!(r.start_s >= 0.0 && r.start_s < r.end_s && r.end_s <= duration_s)) fail("rough segment outside trip");
      if (!(r.sigma_g >= 0.0)) fail("rough sigma_g must be non-negative");
    }
    for (const auto& b : bumps) {
      if (!(b.t_s >= 0.0 && b.t_s <= duration_s)) fail("bump outside trip");
      if (b.width_samples < 1) fail("bump width must be at least one sample");
    }
    if (speed_profile.empty()) fail("speed_profile needs at least one knot");
    for (std::size_t i = 0; i < speed_profile.size(); ++i) {
      if (!(speed_profile[i].mps >= 0.0)) fail("speeds must be non-negative");
      if (i > 0 && !(speed_profile[i].t_s > speed_profile[i - 1].t_s)) fail("speed knots must be increasing");
    }
    if (!valid_coordinates(origin.lat, origin.lon)) fail("origin out of range");
  }
};

struct BumpLabel {
  std::int64_t t_ms = 0;  // centre of the injected pulse
  std::int64_t t_start_ms = 0;
  std::int64_t t_end_ms = 0;
  double height_g = 0.0;
};

struct RoughLabel {
  std::int64_t t_start_ms = 0;
  std::int64_t t_end_ms = 0;
  double sigma_g = 0.0;
};

struct Labels {
  std::string trip_id;
  std::vector<BumpLabel> bumps;
  std::vector<RoughLabel> rough;
};

struct SyntheticTrip {
  std::vector<AccelSample> samples;
  std::vector<GpsFix> fixes;
  Labels labels;
};

/// Piecewise-linear speed, constant outside the knots.
inline double speed_at_time(const std::vector<SpeedKnot>& knots, double t) {
  if (t <= knots.front().t_s) return knots.front().mps;
  if (t >= knots.back().t_s) return knots.back().mps;
  const auto hi = std::upper_bound(knots.begin(), knots.end(), t,
                                   [](double v, const SpeedKnot& k) { return v < k.t_s; });
  const auto lo = hi - 1;
  const double f = (t - lo->t_s) / (hi->t_s - lo->t_s);
  return lo->mps + f * (hi->mps - lo->mps);
}

/// Exact integral of the piecewise-linear speed from 0 to t.
inline double distance_at_time(const std::vector<SpeedKnot>& knots, double t) {
  double dist = 0.0;
  double prev_t = 0.0;
  double prev_v = speed_at_time(knots, 0.0);
  for (const auto& k : knots) {
    if (k.t_s <= prev_t) continue;
    const double seg_end = std::min(k.t_s, t);
    const double v_end = speed_at_time(knots, seg_end);
    dist += 0.5 * (prev_v + v_end) * (seg_end - prev_t);
    prev_t = seg_end;
    prev_v = v_end;
    if (seg_end >= t) return dist;
  }
  return dist + prev_v * (t - prev_t);
}

inline LatLon position_at_distance(const Scenario& sc, double dist_m) {
  constexpr double kDeg = 180.0 / std::numbers::pi;
  const double heading = sc.heading_deg / kDeg;
  const double north = dist_m * std::cos(heading);
  const double east = dist_m * std::sin(heading);
  return {sc.origin.lat + north / kEarthRadiusM * kDeg,
          sc.origin.lon + east / (kEarthRadiusM * std::cos(sc.origin.lat / kDeg)) * kDeg};
}

/// Raised-cosine pulse weights for a bump of the given width.
inline std::vector<double> bump_shape(int width) {
  std::vector<double> w(static_cast<std::size_t>(width));
  for (int k = 0; k < width; ++k) {
    w[static_cast<std::size_t>(k)] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * (k + 0.5) / width));
  }
  return w;
}

inline SyntheticTrip generate_trip(const Scenario& sc) {
  sc.validate();
  SyntheticTrip trip;
  trip.labels.trip_id = sc.trip_id;

  const auto n = static_cast<std::size_t>(std::floor(sc.duration_s * sc.sample_rate_hz));
  const auto time_ms = [&](std::size_t i) {
    return static_cast<std::int64_t>(std::llround(static_cast<double>(i) * 1000.0 / sc.sample_rate_hz));
  };
  const auto index_of = [&](double t_s) { return static_cast<long long>(std::llround(t_s * sc.sample_rate_hz)); };

  const double norm = std::hypot(sc.gravity_orientation[0], sc.gravity_orientation[1], sc.gravity_orientation[2]);
  const std::array<double, 3> up{sc.gravity_orientation[0] / norm, sc.gravity_orientation[1] / norm,
                                 sc.gravity_orientation[2] / norm};

  // vertical excitation in g per sample
  std::vector<double> vertical(n, 0.0);
  for (const auto& b : sc.bumps) {
    const auto shape = bump_shape(b.width_samples);
    const long long first = index_of(b.t_s) - b.width_samples / 2;
    for (int k = 0; k < b.width_samples; ++k) {
      const long long i = first + k;
      if (i >= 0 && static_cast<std::size_t>(i) < n) vertical[static_cast<std::size_t>(i)] += b.height_g * shape[static_cast<std::size_t>(k)];
    }
    const long long last = first + b.width_samples - 1;
    trip.labels.bumps.push_back(BumpLabel{static_cast<std::int64_t>(std::llround(b.t_s * 1000.0)),
                                          time_ms(static_cast<std::size_t>(std::max(0LL, first))),
                                          time_ms(static_cast<std::size_t>(std::max(0LL, last))), b.height_g});
  }
  for (const auto& r : sc.rough_segments) {
    trip.labels.rough.push_back(RoughLabel{static_cast<std::int64_t>(std::llround(r.start_s * 1000.0)),
                                           static_cast<std::int64_t>(std::llround(r.end_s * 1000.0)), r.sigma_g});
  }

  std::mt19937_64 rng(sc.rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  trip.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t_s = static_cast<double>(i) / sc.sample_rate_hz;
    double sigma2 = sc.noise_sigma_g * sc.noise_sigma_g;
    for (const auto& r : sc.rough_segments) {
      if (t_s >= r.start_s && t_s < r.end_s) sigma2 += r.sigma_g * r.sigma_g;
    }
    const double sigma = std::sqrt(sigma2);
    const double lift = 1.0 + vertical[i];
    std::array<double, 3> a{};
    for (std::size_t axis = 0; axis < 3; ++axis) {
      const double noise = sigma > 0.0 ? sigma * gauss(rng) : 0.0;
      a[axis] = sc.device_gain * kGravity * (lift * up[axis] + noise);
    }
    trip.samples.push_back(AccelSample{time_ms(i), a[0], a[1], a[2]});
  }

  const double gps_period_s = 1.0 / sc.gps_rate_hz;
  for (std::size_t k = 0;; ++k) {
    const double t_s = static_cast<double>(k) * gps_period_s;
    if (t_s > sc.duration_s) break;
    const LatLon p = position_at_distance(sc, distance_at_time(sc.speed_profile, t_s));
    trip.fixes.push_back(GpsFix{static_cast<std::int64_t>(std::llround(t_s * 1000.0)), p.lat, p.lon,
                                sc.gps_accuracy_m});
  }
  return trip;
}

/// Trip CSV with rows in timestamp order (GPS before accelerometer on ties).
inline std::string write_trip_csv(const std::vector<AccelSample>& samples, const std::vector<GpsFix>& fixes) {
  std::string out;
  out.reserve(samples.size() * 40 + fixes.size() * 48 + 32);
  out += kTripCsvHeader;
  out += '\n';
  char buf[160];
  std::size_t gi = 0;
  const auto emit_fix = [&](const GpsFix& f) {
    if (f.accuracy) {
      std::snprintf(buf, sizeof buf, "G,%lld,%.7f,%.7f,%.1f\n", static_cast<long long>(f.t_ms), f.lat, f.lon,
                    *f.accuracy);
    } else {
      std::snprintf(buf, sizeof buf, "G,%lld,%.7f,%.7f,\n", static_cast<long long>(f.t_ms), f.lat, f.lon);
    }
    out += buf;
  };
  for (const auto& s : samples) {
    while (gi < fixes.size() && fixes[gi].t_ms <= s.t_ms) emit_fix(fixes[gi++]);
    std::snprintf(buf, sizeof buf, "A,%lld,%.6f,%.6f,%.6f\n", static_cast<long long>(s.t_ms), s.ax, s.ay, s.az);
    out += buf;
  }
  while (gi < fixes.size()) emit_fix(fixes[gi++]);
  return out;
}

inline std::string write_labels(const Labels& labels) {
  nlohmann::ordered_json doc;
  doc["trip_id"] = labels.trip_id;
  doc["bumps"] = nlohmann::ordered_json::array();
  for (const auto& b : labels.bumps) {
    doc["bumps"].push_back({{"height_g", b.height_g},
                            {"t_end_ms", b.t_end_ms},
                            {"t_ms", b.t_ms},
                            {"t_start_ms", b.t_start_ms}});
  }
  doc["rough"] = nlohmann::ordered_json::array();
  for (const auto& r : labels.rough) {
    doc["rough"].push_back({{"sigma_g", r.sigma_g}, {"t_end_ms", r.t_end_ms}, {"t_start_ms", r.t_start_ms}});
  }
  return doc.dump(2) + "\n";
}

inline Labels parse_labels(const std::string& text) {
  Labels out;
  try {
    const auto doc = nlohmann::json::parse(text);
    out.trip_id = doc.at("trip_id").get<std::string>();
    for (const auto& b : doc.at("bumps")) {
      out.bumps.push_back({b.at("t_ms").get<std::int64_t>(), b.at("t_start_ms").get<std::int64_t>(),
                           b.at("t_end_ms").get<std::int64_t>(), b.at("height_g").get<double>()});
    }
    for (const auto& r : doc.at("rough")) {
      out.rough.push_back(
          {r.at("t_start_ms").get<std::int64_t>(), r.at("t_end_ms").get<std::int64_t>(), r.at("sigma_g").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::format, std::string("malformed label file: ") + e.what());
  }
  return out;
}

/// Parses a scenario document (JSON, // comments allowed).
inline Scenario parse_scenario(const std::string& text) {
  using nlohmann::json;
  Scenario sc;
  try {
    const json doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    const auto get = [&](const char* key, auto& out) {
      if (auto it = doc.find(key); it != doc.end()) out = it->get<std::decay_t<decltype(out)>>();
    };
    get("trip_id", sc.trip_id);
    get("duration_s", sc.duration_s);
    get("sample_rate_hz", sc.sample_rate_hz);
    get("gravity_orientation", sc.gravity_orientation);
    get("device_gain", sc.device_gain);
    get("noise_sigma_g", sc.noise_sigma_g);
    get("rng_seed", sc.rng_seed);
    get("heading_deg", sc.heading_deg);
    get("gps_rate_hz", sc.gps_rate_hz);
    get("gps_accuracy_m", sc.gps_accuracy_m);
    if (auto it = doc.find("origin"); it != doc.end()) {
      sc.origin = {it->at("lat").get<double>(), it->at("lon").get<double>()};
    }
    if (auto it = doc.find("rough_segments"); it != doc.end()) {
      for (const auto& r : *it) {
        sc.rough_segments.push_back(
            {r.at("start_s").get<double>(), r.at("end_s").get<double>(), r.at("sigma_g").get<double>()});
      }
    }
    if (auto it = doc.find("bumps"); it != doc.end()) {
      for (const auto& b : *it) {
        sc.bumps.push_back({b.at("t_s").get<double>(), b.at("height_g").get<double>(), b.value("width_samples", 6)});
      }
    }
    if (auto it = doc.find("speed_profile"); it != doc.end()) {
      sc.speed_profile.clear();
      for (const auto& k : *it) sc.speed_profile.push_back({k.at("t_s").get<double>(), k.at("mps").get<double>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::scenario, std::string("malformed scenario: ") + e.what());
  }
  sc.validate();
  return sc;
}

}  // namespace roadsense::synth
