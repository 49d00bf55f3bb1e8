#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <random>
#include <set>

#include "helpers.hpp"

using namespace roadsense;

namespace {

// metres north/east of a fixed origin
LatLon offset(double north_m, double east_m) {
  const LatLon o{1.3521, 103.8198};
  const double dlat = north_m / kEarthRadiusM * 180.0 / std::numbers::pi;
  const double dlon = east_m / (kEarthRadiusM * std::cos(o.lat * std::numbers::pi / 180.0)) * 180.0 / std::numbers::pi;
  return {o.lat + dlat, o.lon + dlon};
}

RoadEvent event(EventKind k, std::int64_t t, std::optional<LatLon> where, double intensity = -2.0) {
  RoadEvent e;
  e.kind = k;
  e.t_start = e.t_end = t;
  e.location = where;
  e.intensity = intensity;
  return e;
}

TripReport report(const std::string& id, std::vector<RoadEvent> events) {
  TripReport r;
  r.trip_id = id;
  for (auto& e : events) e.trip_id = id;
  r.events = std::move(events);
  return r;
}

}  // namespace

TEST(Cluster, SharedEventsMergeAcrossTrips) {
  const std::vector<TripReport> reports{
      report("a", {event(EventKind::bump, 1000, offset(0, 0)), event(EventKind::bump, 9000, offset(0, 200))}),
      report("b", {event(EventKind::bump, 1100, offset(3, 2)), event(EventKind::bump, 9100, offset(-2, 203))}),
  };
  const auto clusters = cluster_events(reports, 15.0);
  ASSERT_EQ(clusters.size(), 2u);
  for (const auto& c : clusters) {
    EXPECT_EQ(c.supporting_trips, 2u);
    EXPECT_EQ(c.events.size(), 2u);
  }
}

TEST(Cluster, KindsNeverMix) {
  const std::vector<TripReport> reports{
      report("a", {event(EventKind::bump, 1000, offset(0, 0))}),
      report("b", {event(EventKind::rough, 1000, offset(1, 1), 2)}),
  };
  EXPECT_EQ(cluster_events(reports, 15.0).size(), 2u);
}

TEST(Cluster, EventsWithoutLocationAreIgnored) {
  const std::vector<TripReport> reports{report("a", {event(EventKind::bump, 1000, std::nullopt)})};
  EXPECT_TRUE(cluster_events(reports, 15.0).empty());
}

TEST(Cluster, SameTripTwiceCountsOnce) {
  const std::vector<TripReport> reports{
      report("a", {event(EventKind::bump, 1000, offset(0, 0)), event(EventKind::bump, 60000, offset(1, 0))}),
  };
  const auto c = cluster_events(reports, 15.0);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].supporting_trips, 1u);
  EXPECT_EQ(c[0].events.size(), 2u);
}

TEST(Cluster, ChainDoesNotGrowBeyondRadius) {
  // points 10 m apart along a line: a cluster may not stretch to cover them all
  std::vector<TripReport> reports;
  for (int i = 0; i < 8; ++i) {
    reports.push_back(report("t" + std::to_string(i), {event(EventKind::bump, 1000, offset(0, 10.0 * i))}));
  }
  for (const auto& c : cluster_events(reports, 15.0)) {
    for (const auto& e : c.events) EXPECT_LE(haversine_m(*e.location, c.centroid), 15.0 + 1e-9);
  }
}

TEST(Cluster, MembersStayWithinRadiusOnRandomInput) {
  std::mt19937_64 rng(501);
  std::uniform_real_distribution<double> u(-60.0, 60.0);
  std::vector<TripReport> reports;
  for (int t = 0; t < 6; ++t) {
    std::vector<RoadEvent> ev;
    for (int i = 0; i < 20; ++i) ev.push_back(event(EventKind::bump, i * 1000, offset(u(rng), u(rng))));
    reports.push_back(report("trip" + std::to_string(t), ev));
  }
  const auto clusters = cluster_events(reports, 15.0);
  std::size_t total = 0;
  for (const auto& c : clusters) {
    total += c.events.size();
    for (const auto& e : c.events) EXPECT_LE(haversine_m(*e.location, c.centroid), 15.0 + 1e-9);
  }
  EXPECT_EQ(total, 120u);
}

TEST(Cluster, IndependentOfReportOrder) {
  std::vector<TripReport> reports{
      report("b", {event(EventKind::bump, 1000, offset(0, 0)), event(EventKind::bump, 5000, offset(12, 0))}),
      report("a", {event(EventKind::bump, 1000, offset(6, 0))}),
      report("c", {event(EventKind::bump, 1000, offset(20, 0))}),
  };
  const auto first = write_map(prune_isolated(cluster_events(reports, 15.0), 1), 15.0, 1);
  std::reverse(reports.begin(), reports.end());
  EXPECT_EQ(write_map(prune_isolated(cluster_events(reports, 15.0), 1), 15.0, 1), first);
}

TEST(Prune, DropsIsolatedAndKeepsLog) {
  const std::vector<TripReport> reports{
      report("a", {event(EventKind::bump, 1000, offset(0, 0))}),
      report("b", {event(EventKind::bump, 1000, offset(2, 0))}),
      report("c", {event(EventKind::bump, 1000, offset(2, 0)), event(EventKind::bump, 4000, offset(0, 80))}),
  };
  const auto clusters = cluster_events(reports, 15.0);
  const auto pruned = prune_isolated(clusters, 2);
  ASSERT_EQ(pruned.confirmed.size(), 1u);
  ASSERT_EQ(pruned.discarded.size(), 1u);
  EXPECT_EQ(pruned.confirmed[0].supporting_trips, 3u);
  EXPECT_EQ(pruned.discarded[0].trip_ids(), std::set<std::string>{"c"});
}

TEST(Prune, MinTripsOneIsIdentity) {
  std::mt19937_64 rng(502);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::vector<TripReport> reports;
  for (int t = 0; t < 3; ++t) {
    std::vector<RoadEvent> ev;
    for (int i = 0; i < 10; ++i) ev.push_back(event(EventKind::bump, i * 1000, offset(u(rng), u(rng))));
    reports.push_back(report("t" + std::to_string(t), ev));
  }
  const auto clusters = cluster_events(reports, 15.0);
  const auto pruned = prune_isolated(clusters, 1);
  EXPECT_TRUE(pruned.discarded.empty());
  ASSERT_EQ(pruned.confirmed.size(), clusters.size());
  EXPECT_EQ(write_map(pruned, 15.0, 1), write_map({clusters, {}}, 15.0, 1));
  EXPECT_THROW(prune_isolated(clusters, 0), Error);
}

TEST(MapDocument, ParsesAndCarriesSettings) {
  const std::vector<TripReport> reports{report("a", {event(EventKind::bump, 1000, offset(0, 0), -2.5)})};
  const auto doc = nlohmann::json::parse(write_map(prune_isolated(cluster_events(reports, 15.0), 2), 15.0, 2));
  EXPECT_EQ(doc.at("min_trips"), 2);
  EXPECT_EQ(doc.at("radius_m"), 15.0);
  EXPECT_EQ(doc.at("schema_version"), 1);
  EXPECT_TRUE(doc.at("clusters").empty());
  ASSERT_EQ(doc.at("discarded").size(), 1u);
  EXPECT_EQ(doc.at("discarded")[0].at("mean_intensity"), -2.5);
}
