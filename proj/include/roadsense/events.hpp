#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roadsense/error.hpp"

namespace roadsense {

enum class EventKind { rough, bump };

inline std::string_view to_string(EventKind k) { return k == EventKind::rough ? "rough" : "bump"; }

inline EventKind parse_event_kind(std::string_view s) {
  if (s == "rough") return EventKind::rough;
  if (s == "bump") return EventKind::bump;
  throw Error(ErrorCode::format, "unknown event kind '" + std::string(s) + "'");
}

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const LatLon&, const LatLon&) = default;
};

/// A detected hazard. intensity is the roughness level (1-3) for rough
/// events and the Lipschitz estimate for bumps.
struct RoadEvent {
  EventKind kind = EventKind::bump;
  std::int64_t t_start = 0;
  std::int64_t t_end = 0;
  std::optional<LatLon> location;
  double intensity = 0.0;
  std::string trip_id;

  friend bool operator==(const RoadEvent&, const RoadEvent&) = default;
};

struct TripStats {
  std::size_t segment_count = 0;
  std::size_t dropped_samples = 0;
  std::size_t gps_gap_count = 0;
  std::size_t malformed_rows = 0;

  friend bool operator==(const TripStats&, const TripStats&) = default;
};

struct TripReport {
  std::string trip_id;
  std::string device_id;
  double sample_rate_hz = 50.0;
  std::vector<RoadEvent> events;  // sorted by t_start
  TripStats stats;

  friend bool operator==(const TripReport&, const TripReport&) = default;
};

}  // namespace roadsense
