#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

#include "json.hpp"
#include "roadsense/error.hpp"
#include "roadsense/events.hpp"
#include "roadsense/geo.hpp"
#include "roadsense/signal.hpp"

namespace roadsense {

inline constexpr std::string_view kTripCsvHeader = "type,t_ms,a,b,c";
inline constexpr int kReportSchemaVersion = 1;

/// Fraction of data rows allowed to be malformed before a file is rejected.
inline constexpr double kMalformedTolerance = 0.01;

struct ParsedTrip {
  std::vector<AccelSample> samples;
  std::vector<GpsFix> fixes;
  std::size_t data_rows = 0;
  std::size_t malformed_rows = 0;
};

namespace detail {

inline std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

inline bool split_fields(std::string_view line, std::array<std::string_view, 5>& out) {
  std::size_t field = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      if (field == out.size()) return false;
      out[field++] = line.substr(start, i - start);
      start = i + 1;
    }
  }
  return field == out.size();
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) return false;
  if constexpr (std::is_floating_point_v<T>) return std::isfinite(out);
  return true;
}

}  // namespace detail

/// Row-level visitor interface used by the streaming reader.
struct TripRowSink {
  virtual ~TripRowSink() = default;
  virtual void on_sample(const AccelSample& s) = 0;
  virtual void on_fix(const GpsFix& f) = 0;
};

struct CsvReadStats {
  std::size_t data_rows = 0;
  std::size_t malformed_rows = 0;
};

/// Streams a trip CSV into `sink`. Malformed rows are skipped and counted;
/// the 1% tolerance is checked once the whole file has been read.
inline CsvReadStats read_trip_csv(std::istream& in, TripRowSink& sink) {
  std::string line;
  if (!std::getline(in, line) || detail::trim_cr(line) != kTripCsvHeader) {
    throw Error(ErrorCode::format, "missing or unexpected header, expected '" + std::string(kTripCsvHeader) + "'");
  }
  CsvReadStats stats;
  std::optional<std::int64_t> last_accel_t;
  std::optional<std::int64_t> last_gps_t;
  std::array<std::string_view, 5> f;
  std::size_t line_no = 1;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = detail::trim_cr(line);
    if (row.empty()) continue;
    ++stats.data_rows;

    std::int64_t t = 0;
    if (!detail::split_fields(row, f) || f[0].size() != 1 || !detail::parse_number(f[1], t)) {
      ++stats.malformed_rows;
      continue;
    }
    if (f[0] == "A") {
      AccelSample s;
      s.t_ms = t;
      if (!detail::parse_number(f[2], s.ax) || !detail::parse_number(f[3], s.ay) ||
          !detail::parse_number(f[4], s.az)) {
        ++stats.malformed_rows;
        continue;
      }
      if (last_accel_t && t < *last_accel_t) {
        throw Error(ErrorCode::ordering, "accelerometer timestamps decrease at line " + std::to_string(line_no));
      }
      last_accel_t = t;
      sink.on_sample(s);
    } else if (f[0] == "G") {
      GpsFix g;
      g.t_ms = t;
      if (!detail::parse_number(f[2], g.lat) || !detail::parse_number(f[3], g.lon) ||
          !valid_coordinates(g.lat, g.lon)) {
        ++stats.malformed_rows;
        continue;
      }
      if (!f[4].empty()) {
        double acc = 0.0;
        if (!detail::parse_number(f[4], acc) || acc < 0.0) {
          ++stats.malformed_rows;
          continue;
        }
        g.accuracy = acc;
      }
      if (last_gps_t && t < *last_gps_t) {
        throw Error(ErrorCode::ordering, "GPS timestamps decrease at line " + std::to_string(line_no));
      }
      last_gps_t = t;
      sink.on_fix(g);
    } else {
      ++stats.malformed_rows;
    }
  }
  if (static_cast<double>(stats.malformed_rows) > kMalformedTolerance * static_cast<double>(stats.data_rows)) {
    throw Error(ErrorCode::corrupt_file, std::to_string(stats.malformed_rows) + " of " +
                                             std::to_string(stats.data_rows) + " rows are malformed");
  }
  return stats;
}

inline ParsedTrip parse_trip_csv(std::istream& in) {
  struct Collect : TripRowSink {
    ParsedTrip* out;
    void on_sample(const AccelSample& s) override { out->samples.push_back(s); }
    void on_fix(const GpsFix& g) override { out->fixes.push_back(g); }
  };
  ParsedTrip trip;
  Collect sink;
  sink.out = &trip;
  const CsvReadStats stats = read_trip_csv(in, sink);
  trip.data_rows = stats.data_rows;
  trip.malformed_rows = stats.malformed_rows;
  return trip;
}

inline ParsedTrip parse_trip_csv(const std::string& text) {
  std::istringstream in(text);
  return parse_trip_csv(in);
}

// ---------------------------------------------------------------------------
// Canonical text output. Keys are emitted in sorted order, numbers with a
// fixed number of decimals, so equal reports are equal byte strings.

namespace detail {

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  // never print "-0.000"
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

inline std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace detail

inline constexpr int kDegreeDecimals = 6;
inline constexpr int kBetaDecimals = 3;

inline std::string format_intensity(const RoadEvent& ev) {
  if (ev.kind == EventKind::rough) return std::to_string(static_cast<long long>(std::llround(ev.intensity)));
  return detail::fixed(ev.intensity, kBetaDecimals);
}

inline std::string write_report(const TripReport& report) {
  std::ostringstream o;
  o << "{\n";
  o << "  \"device_id\": " << detail::quoted(report.device_id) << ",\n";
  if (report.events.empty()) {
    o << "  \"events\": [],\n";
  } else {
    o << "  \"events\": [\n";
    for (std::size_t i = 0; i < report.events.size(); ++i) {
      const RoadEvent& ev = report.events[i];
      o << "    {";
      o << "\"intensity\": " << format_intensity(ev) << ", ";
      o << "\"kind\": \"" << to_string(ev.kind) << "\", ";
      if (ev.location) {
        o << "\"lat\": " << detail::fixed(ev.location->lat, kDegreeDecimals) << ", ";
        o << "\"lon\": " << detail::fixed(ev.location->lon, kDegreeDecimals) << ", ";
      } else {
        o << "\"lat\": null, \"lon\": null, ";
      }
      o << "\"t_end_ms\": " << ev.t_end << ", ";
      o << "\"t_start_ms\": " << ev.t_start << ", ";
      o << "\"trip_id\": " << detail::quoted(ev.trip_id);
      o << (i + 1 < report.events.size() ? "},\n" : "}\n");
    }
    o << "  ],\n";
  }
  o << "  \"sample_rate_hz\": " << detail::fixed(report.sample_rate_hz, 3) << ",\n";
  o << "  \"schema_version\": " << kReportSchemaVersion << ",\n";
  o << "  \"stats\": {";
  o << "\"dropped_samples\": " << report.stats.dropped_samples << ", ";
  o << "\"gps_gap_count\": " << report.stats.gps_gap_count << ", ";
  o << "\"malformed_rows\": " << report.stats.malformed_rows << ", ";
  o << "\"segment_count\": " << report.stats.segment_count << "},\n";
  o << "  \"trip_id\": " << detail::quoted(report.trip_id) << "\n";
  o << "}\n";
  return o.str();
}

inline TripReport parse_report(const std::string& text) {
  using nlohmann::json;
  TripReport r;
  try {
    const json doc = json::parse(text);
    if (doc.at("schema_version").get<int>() != kReportSchemaVersion) {
      throw Error(ErrorCode::format, "unsupported report schema version");
    }
    r.trip_id = doc.at("trip_id").get<std::string>();
    r.device_id = doc.at("device_id").get<std::string>();
    r.sample_rate_hz = doc.at("sample_rate_hz").get<double>();
    const json& st = doc.at("stats");
    r.stats.dropped_samples = st.at("dropped_samples").get<std::size_t>();
    r.stats.gps_gap_count = st.at("gps_gap_count").get<std::size_t>();
    r.stats.malformed_rows = st.at("malformed_rows").get<std::size_t>();
    r.stats.segment_count = st.at("segment_count").get<std::size_t>();
    for (const json& e : doc.at("events")) {
      RoadEvent ev;
      ev.kind = parse_event_kind(e.at("kind").get<std::string>());
      ev.t_start = e.at("t_start_ms").get<std::int64_t>();
      ev.t_end = e.at("t_end_ms").get<std::int64_t>();
      ev.intensity = e.at("intensity").get<double>();
      ev.trip_id = e.at("trip_id").get<std::string>();
      if (!e.at("lat").is_null() && !e.at("lon").is_null()) {
        ev.location = LatLon{e.at("lat").get<double>(), e.at("lon").get<double>()};
      }
      r.events.push_back(std::move(ev));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::format, std::string("malformed report: ") + e.what());
  }
  return r;
}

/// Rounds a report's values to their serialized precision, so that
/// parse_report(write_report(r)) == canonicalize(r).
inline TripReport canonicalize(TripReport r) {
  const auto round_to = [](double v, int d) { return std::stod(detail::fixed(v, d)); };
  r.sample_rate_hz = round_to(r.sample_rate_hz, 3);
  for (auto& ev : r.events) {
    ev.intensity = ev.kind == EventKind::rough ? std::round(ev.intensity) : round_to(ev.intensity, kBetaDecimals);
    if (ev.location) {
      ev.location->lat = round_to(ev.location->lat, kDegreeDecimals);
      ev.location->lon = round_to(ev.location->lon, kDegreeDecimals);
    }
  }
  return r;
}

}  // namespace roadsense
