#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"

using namespace roadsense;

namespace {

// Spherical law of cosines; independent of the haversine form.
double cosine_law_m(const LatLon& a, const LatLon& b) {
  const double k = std::numbers::pi / 180.0;
  const double c = std::sin(a.lat * k) * std::sin(b.lat * k) +
                   std::cos(a.lat * k) * std::cos(b.lat * k) * std::cos((b.lon - a.lon) * k);
  return kEarthRadiusM * std::acos(std::clamp(c, -1.0, 1.0));
}

const std::vector<GpsFix> kTwo{{0, 1.0, 103.0, 5.0}, {10000, 1.001, 103.0, 5.0}};

}  // namespace

TEST(Haversine, OneThousandthDegreeOfLatitude) {
  EXPECT_NEAR(haversine_m({1.0, 103.0}, {1.001, 103.0}), 111.19, 0.01);
}

TEST(Haversine, AntipodalIsHalfCircumference) {
  EXPECT_NEAR(haversine_m({0.0, 0.0}, {0.0, 180.0}), std::numbers::pi * kEarthRadiusM, 1e-6);
  EXPECT_NEAR(haversine_m({90.0, 0.0}, {-90.0, 0.0}), std::numbers::pi * kEarthRadiusM, 1e-6);
}

TEST(Haversine, SymmetricAndMatchesCosineLaw) {
  std::mt19937_64 rng(401);
  std::uniform_real_distribution<double> lat(-80.0, 80.0), lon(-180.0, 180.0);
  for (int i = 0; i < 1000; ++i) {
    const LatLon a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)};
    const double d = haversine_m(a, b);
    EXPECT_DOUBLE_EQ(d, haversine_m(b, a));
    EXPECT_NEAR(d, cosine_law_m(a, b), 1e-3);
    EXPECT_EQ(haversine_m(a, a), 0.0);
  }
}

TEST(Interpolate, MidpointAndClamp) {
  const LatLon mid = interpolate_position(kTwo, 5000);
  EXPECT_NEAR(mid.lat, 1.0005, 1e-12);
  EXPECT_NEAR(mid.lon, 103.0, 1e-12);
  EXPECT_EQ(interpolate_position(kTwo, -500).lat, 1.0);
  EXPECT_EQ(interpolate_position(kTwo, 99999).lat, 1.001);
  EXPECT_EQ(interpolate_position(kTwo, 10000).lat, 1.001);
  EXPECT_THROW(interpolate_position(std::vector<GpsFix>{}, 0), Error);
}

TEST(Speed, FromBracketingFixes) {
  EXPECT_NEAR(speed_at(kTwo, 5000), 11.12, 0.01);
  EXPECT_NEAR(speed_at(kTwo, -100000), 11.12, 0.01);
  EXPECT_THROW(speed_at(std::vector<GpsFix>{kTwo[0]}, 0), Error);
}

TEST(Speed, DuplicateTimestampsAreSkipped) {
  const std::vector<GpsFix> f{{0, 1.0, 103.0, {}}, {1000, 1.0001, 103.0, {}}, {1000, 1.0001, 103.0, {}}};
  EXPECT_GT(speed_at(f, 1000), 10.0);
  const std::vector<GpsFix> same{{0, 1.0, 103.0, {}}, {0, 1.0, 103.0, {}}};
  EXPECT_THROW(speed_at(same, 0), Error);
}

TEST(Speed, MatchesSyntheticProfile) {
  synth::Scenario sc;
  sc.duration_s = 60.0;
  sc.speed_profile = {{0.0, 0.0}, {30.0, 12.0}, {60.0, 12.0}};
  const auto trip = synth::generate_trip(sc);
  for (double t : {10.5, 20.5, 45.5}) {
    const double expected = synth::speed_at_time(sc.speed_profile, t);
    EXPECT_NEAR(speed_at(trip.fixes, static_cast<std::int64_t>(t * 1000)), expected, 0.05) << t;
  }
}

TEST(Locate, NullInsideLongDropout) {
  const std::vector<GpsFix> f{{0, 1.0, 103.0, {}}, {1000, 1.0, 103.001, {}}, {20000, 1.0, 103.01, {}}};
  EXPECT_TRUE(locate(f, 500, 10000));
  EXPECT_FALSE(locate(f, 5000, 10000));
  EXPECT_TRUE(locate(f, 20000, 10000));
  EXPECT_FALSE(locate(f, 40000, 10000));
  EXPECT_FALSE(locate(std::vector<GpsFix>{}, 0, 10000));
}

TEST(Coordinates, Validation) {
  EXPECT_TRUE(valid_coordinates(90.0, 180.0));
  EXPECT_FALSE(valid_coordinates(90.1, 0.0));
  EXPECT_FALSE(valid_coordinates(0.0, -180.5));
  EXPECT_FALSE(valid_coordinates(std::nan(""), 0.0));
}

TEST(Pipeline, EventInsideGpsDropoutHasNoLocation) {
  synth::Scenario sc = testing_support::scenario("surge_moving");
  auto trip = synth::generate_trip(sc);
  std::erase_if(trip.fixes, [](const GpsFix& f) { return f.t_ms > 5000 && f.t_ms < 25000; });
  const auto r = testing_support::analyze(trip);
  const auto bumps = testing_support::of_kind(r, EventKind::bump);
  ASSERT_EQ(bumps.size(), 1u);
  EXPECT_FALSE(bumps[0].location);
  EXPECT_EQ(r.stats.gps_gap_count, 1u);
}

TEST(Pipeline, EventLocatedOnTheRoute) {
  const synth::Scenario sc = testing_support::scenario("surge_moving");
  const auto trip = synth::generate_trip(sc);
  const auto bumps = testing_support::of_kind(testing_support::analyze(trip), EventKind::bump);
  ASSERT_EQ(bumps.size(), 1u);
  ASSERT_TRUE(bumps[0].location);
  const LatLon truth = synth::position_at_distance(sc, synth::distance_at_time(sc.speed_profile, 15.5));
  EXPECT_LT(haversine_m(*bumps[0].location, truth), 5.0);
}
