#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "roadsense/events.hpp"
#include "roadsense/geo.hpp"
#include "roadsense/trip_io.hpp"

namespace roadsense {

inline constexpr int kMapSchemaVersion = 1;

struct HazardCluster {
  LatLon centroid;
  EventKind kind = EventKind::bump;
  std::size_t supporting_trips = 0;
  std::vector<RoadEvent> events;
  double mean_intensity = 0.0;

  std::set<std::string> trip_ids() const {
    std::set<std::string> ids;
    for (const auto& e : events) ids.insert(e.trip_id);
    return ids;
  }
};

namespace detail {

inline void refresh(HazardCluster& c) {
  double lat = 0.0, lon = 0.0, inten = 0.0;
  for (const auto& e : c.events) {
    lat += e.location->lat;
    lon += e.location->lon;
    inten += e.intensity;
  }
  const auto n = static_cast<double>(c.events.size());
  c.centroid = {lat / n, lon / n};
  c.mean_intensity = inten / n;
  // repeated crossings by one trip count once
  c.supporting_trips = c.trip_ids().size();
}

inline bool fits(const HazardCluster& c, double radius_m) {
  return std::all_of(c.events.begin(), c.events.end(),
                     [&](const RoadEvent& e) { return haversine_m(*e.location, c.centroid) <= radius_m; });
}

}  // namespace detail

/// Greedy clustering over a canonical order (reports by trip_id, events by
/// time). An event joins the nearest same-kind cluster whose centroid is
/// within radius_m, provided every member stays within radius_m of the
/// updated centroid; otherwise it starts a new cluster. Events without a
/// location are ignored.
inline std::vector<HazardCluster> cluster_events(std::span<const TripReport> reports, double radius_m) {
  std::vector<const TripReport*> order;
  for (const auto& r : reports) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](const TripReport* a, const TripReport* b) { return a->trip_id < b->trip_id; });

  std::vector<HazardCluster> clusters;
  for (const TripReport* r : order) {
    std::vector<RoadEvent> events = r->events;
    std::stable_sort(events.begin(), events.end(),
                     [](const RoadEvent& a, const RoadEvent& b) { return a.t_start < b.t_start; });
    for (RoadEvent ev : events) {
      if (!ev.location) continue;
      if (ev.trip_id.empty()) ev.trip_id = r->trip_id;

      std::vector<std::pair<double, std::size_t>> candidates;
      for (std::size_t i = 0; i < clusters.size(); ++i) {
        if (clusters[i].kind != ev.kind) continue;
        const double d = haversine_m(*ev.location, clusters[i].centroid);
        if (d <= radius_m) candidates.emplace_back(d, i);
      }
      std::stable_sort(candidates.begin(), candidates.end());

      bool placed = false;
      for (const auto& [d, i] : candidates) {
        HazardCluster trial = clusters[i];
        trial.events.push_back(ev);
        detail::refresh(trial);
        if (detail::fits(trial, radius_m)) {
          clusters[i] = std::move(trial);
          placed = true;
          break;
        }
      }
      if (!placed) {
        HazardCluster c;
        c.kind = ev.kind;
        c.events.push_back(ev);
        detail::refresh(c);
        clusters.push_back(std::move(c));
      }
    }
  }
  return clusters;
}

struct PruneResult {
  std::vector<HazardCluster> confirmed;
  std::vector<HazardCluster> discarded;
};

inline PruneResult prune_isolated(std::span<const HazardCluster> clusters, std::size_t min_trips) {
  if (min_trips < 1) throw Error(ErrorCode::configuration, "min_trips must be at least 1");
  PruneResult out;
  for (const auto& c : clusters) {
    (c.supporting_trips >= min_trips ? out.confirmed : out.discarded).push_back(c);
  }
  return out;
}

namespace detail {

inline void write_clusters(std::ostream& o, const char* key, std::span<const HazardCluster> clusters) {
  if (clusters.empty()) {
    o << "  \"" << key << "\": [],\n";
    return;
  }
  o << "  \"" << key << "\": [\n";
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const HazardCluster& c = clusters[i];
    o << "    {";
    o << "\"event_count\": " << c.events.size() << ", ";
    o << "\"kind\": \"" << to_string(c.kind) << "\", ";
    o << "\"lat\": " << fixed(c.centroid.lat, kDegreeDecimals) << ", ";
    o << "\"lon\": " << fixed(c.centroid.lon, kDegreeDecimals) << ", ";
    o << "\"mean_intensity\": " << fixed(c.mean_intensity, kBetaDecimals) << ", ";
    o << "\"supporting_trips\": " << c.supporting_trips << ", ";
    o << "\"trip_ids\": [";
    bool first = true;
    for (const auto& id : c.trip_ids()) {
      o << (first ? "" : ", ") << quoted(id);
      first = false;
    }
    o << "]";
    o << (i + 1 < clusters.size() ? "},\n" : "}\n");
  }
  o << "  ],\n";
}

}  // namespace detail

/// Canonical map document: confirmed clusters plus the discard log.
inline std::string write_map(const PruneResult& result, double radius_m, std::size_t min_trips) {
  std::ostringstream o;
  o << "{\n";
  detail::write_clusters(o, "clusters", result.confirmed);
  detail::write_clusters(o, "discarded", result.discarded);
  o << "  \"min_trips\": " << min_trips << ",\n";
  o << "  \"radius_m\": " << detail::fixed(radius_m, 3) << ",\n";
  o << "  \"schema_version\": " << kMapSchemaVersion << "\n";
  o << "}\n";
  return o.str();
}

}  // namespace roadsense
