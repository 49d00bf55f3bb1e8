#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <numbers>
#include <optional>
#include <span>
#include <utility>

#include "roadsense/error.hpp"
#include "roadsense/events.hpp"

namespace roadsense {

inline constexpr double kEarthRadiusM = 6371000.0;

struct GpsFix {
  std::int64_t t_ms = 0;
  double lat = 0.0;
  double lon = 0.0;
  std::optional<double> accuracy;

  friend bool operator==(const GpsFix&, const GpsFix&) = default;
};

inline bool valid_coordinates(double lat, double lon) {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 && lon >= -180.0 &&
         lon <= 180.0;
}

/// Great-circle distance in meters.
inline double haversine_m(const LatLon& a, const LatLon& b) {
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * kDeg;
  const double dlon = (b.lon - a.lon) * kDeg;
  const double s1 = std::sin(dlat / 2.0);
  const double s2 = std::sin(dlon / 2.0);
  const double h = s1 * s1 + std::cos(a.lat * kDeg) * std::cos(b.lat * kDeg) * s2 * s2;
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(std::min(1.0, h)));
}

namespace detail {

// Index of the first fix with t > t_ms.
inline std::size_t upper_index(std::span<const GpsFix> fixes, std::int64_t t_ms) {
  const auto it = std::upper_bound(fixes.begin(), fixes.end(), t_ms,
                                   [](std::int64_t t, const GpsFix& f) { return t < f.t_ms; });
  return static_cast<std::size_t>(std::distance(fixes.begin(), it));
}

}  // namespace detail

/// Linear interpolation in degrees, clamped to the first/last fix.
inline LatLon interpolate_position(std::span<const GpsFix> fixes, std::int64_t t_ms) {
  if (fixes.empty()) throw Error(ErrorCode::no_location, "no GPS fixes");
  const std::size_t hi = detail::upper_index(fixes, t_ms);
  if (hi == 0) return {fixes.front().lat, fixes.front().lon};
  if (hi == fixes.size()) return {fixes.back().lat, fixes.back().lon};
  const GpsFix& a = fixes[hi - 1];
  const GpsFix& b = fixes[hi];
  if (a.t_ms == t_ms || b.t_ms == a.t_ms) return {a.lat, a.lon};
  const double f = static_cast<double>(t_ms - a.t_ms) / static_cast<double>(b.t_ms - a.t_ms);
  return {a.lat + f * (b.lat - a.lat), a.lon + f * (b.lon - a.lon)};
}

/// The pair of fixes used to evaluate speed at t: the bracketing pair inside
/// the covered span, the first/last pair outside it.
inline std::pair<std::size_t, std::size_t> speed_pair(std::span<const GpsFix> fixes, std::int64_t t_ms) {
  std::size_t hi = detail::upper_index(fixes, t_ms);
  hi = std::clamp<std::size_t>(hi, 1, fixes.size() - 1);
  std::size_t lo = hi - 1;
  // step over duplicated timestamps so the time gap is positive
  while (lo > 0 && fixes[lo].t_ms == fixes[hi].t_ms) --lo;
  while (hi + 1 < fixes.size() && fixes[lo].t_ms == fixes[hi].t_ms) ++hi;
  return {lo, hi};
}

/// Ground speed in m/s from the haversine distance between bracketing fixes.
inline double speed_at(std::span<const GpsFix> fixes, std::int64_t t_ms) {
  if (fixes.size() < 2) throw Error(ErrorCode::no_speed, "speed needs at least two GPS fixes");
  const auto [lo, hi] = speed_pair(fixes, t_ms);
  const GpsFix& a = fixes[lo];
  const GpsFix& b = fixes[hi];
  if (a.t_ms == b.t_ms) throw Error(ErrorCode::no_speed, "GPS fixes share a single timestamp");
  const double dist = haversine_m({a.lat, a.lon}, {b.lat, b.lon});
  return dist / (static_cast<double>(b.t_ms - a.t_ms) / 1000.0);
}

/// Length of the GPS gap containing t (0 when t sits exactly on a fix).
/// Times outside the covered span count as a gap reaching the nearest fix.
inline std::int64_t gap_at(std::span<const GpsFix> fixes, std::int64_t t_ms) {
  if (fixes.empty()) return INT64_MAX;
  const std::size_t hi = detail::upper_index(fixes, t_ms);
  if (hi == 0) return fixes.front().t_ms - t_ms;
  if (hi == fixes.size()) return t_ms - fixes.back().t_ms;
  if (fixes[hi - 1].t_ms == t_ms) return 0;
  return fixes[hi].t_ms - fixes[hi - 1].t_ms;
}

/// Location for an event at t, or nullopt inside a dropout longer than max_gap_ms.
inline std::optional<LatLon> locate(std::span<const GpsFix> fixes, std::int64_t t_ms, std::int64_t max_gap_ms) {
  if (fixes.empty() || gap_at(fixes, t_ms) > max_gap_ms) return std::nullopt;
  return interpolate_position(fixes, t_ms);
}

}  // namespace roadsense
