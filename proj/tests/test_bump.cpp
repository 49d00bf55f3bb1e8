#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "helpers.hpp"

using namespace roadsense;
using testing_support::random_segment;

namespace {

Segment segment_from(const std::vector<double>& x, std::int64_t t0 = 0) {
  Segment s;
  std::copy(x.begin(), x.end(), s.values.begin());
  s.t_start = t0;
  s.t_end = t0 + 620;
  return s;
}

void expect_same(const LipschitzEstimate& a, const LipschitzEstimate& b) {
  ASSERT_EQ(a.valid, b.valid);
  if (!a.valid) return;
  EXPECT_NEAR(a.beta_hat, b.beta_hat, 1e-9);
  EXPECT_NEAR(a.p1, b.p1, 1e-9);
  EXPECT_NEAR(a.p2, b.p2, 1e-9);
  EXPECT_EQ(a.loc, b.loc);
}

std::vector<double> pulse_segment(std::mt19937_64& rng, std::size_t centre, double height) {
  auto x = random_segment(rng, 0.02 * kGravity);
  const auto shape = synth::bump_shape(6);
  for (std::size_t k = 0; k < shape.size(); ++k) x[centre - 3 + k] += height * kGravity * shape[k];
  for (auto& v : x) v += kGravity;
  return x;
}

}  // namespace

TEST(LogLinearFit, RecoversExactPowerLaw) {
  const std::vector<ScaleModulus> m{{1.0, 3.0}, {2.0, 3.0 * std::pow(2.0, 0.4)}, {4.0, 3.0 * std::pow(4.0, 0.4)}};
  const LogLinearFit f = lipschitz_lsq(m);
  EXPECT_NEAR(f.beta, 0.4, 1e-12);
  EXPECT_NEAR(f.amplitude, 3.0, 1e-12);
}

TEST(LogLinearFit, TwoScalesGiveTheSlope) {
  const std::vector<ScaleModulus> m{{1.0, 8.0}, {2.0, 4.0}};
  const LogLinearFit f = lipschitz_lsq(m);
  EXPECT_NEAR(f.beta, -1.0, 1e-12);
  EXPECT_NEAR(f.amplitude, 8.0, 1e-12);
}

TEST(LogLinearFit, MatchesClosedFormLeastSquares) {
  std::mt19937_64 rng(301);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ScaleModulus> m;
    for (double s : {1.0, 2.0, 4.0, 8.0}) m.push_back({s, u(rng)});
    // slope = cov(x, y) / var(x)
    double mx = 0, my = 0;
    for (const auto& p : m) {
      mx += std::log2(p.scale) / 4.0;
      my += std::log2(p.magnitude) / 4.0;
    }
    double cxy = 0, vx = 0;
    for (const auto& p : m) {
      cxy += (std::log2(p.scale) - mx) * (std::log2(p.magnitude) - my);
      vx += (std::log2(p.scale) - mx) * (std::log2(p.scale) - mx);
    }
    const LogLinearFit f = lipschitz_lsq(m);
    EXPECT_NEAR(f.beta, cxy / vx, 1e-12);
    EXPECT_NEAR(std::log2(f.amplitude), my - (cxy / vx) * mx, 1e-12);
  }
}

TEST(LogLinearFit, DegenerateInputs) {
  EXPECT_THROW(lipschitz_lsq(std::vector<ScaleModulus>{{1.0, 2.0}}), Error);
  EXPECT_THROW(lipschitz_lsq(std::vector<ScaleModulus>{{2.0, 2.0}, {2.0, 3.0}}), Error);
  EXPECT_THROW(lipschitz_lsq(std::vector<ScaleModulus>{{1.0, 0.0}, {2.0, 3.0}}), Error);
}

TEST(Algorithm1, MatchesOracleOnRandomSegments) {
  std::mt19937_64 rng(302);
  for (int trial = 0; trial < 1000; ++trial) {
    auto x = random_segment(rng, 2.0);
    for (auto& v : x) v += kGravity;
    expect_same(lipschitz_algorithm1(x, default_basis()), oracle::oracle_algorithm1(x));
  }
}

TEST(Algorithm1, MatchesOracleOnQuantisedSegments) {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 500; ++trial) {
    auto x = random_segment(rng, 2.0);
    for (auto& v : x) v = std::round(v * 2.0) / 2.0;
    expect_same(lipschitz_algorithm1(x, default_basis()), oracle::oracle_algorithm1(x));
  }
}

TEST(Algorithm1, BetaIsSevenSeventeenthsOfLogProduct) {
  std::mt19937_64 rng(304);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto x = random_segment(rng, 1.0);
    const auto e = lipschitz_algorithm1(x, default_basis());
    if (!e.valid) continue;
    EXPECT_NEAR(e.beta_hat, 7.0 / 17.0 * std::log2(e.p1 * e.p2), 1e-12);
  }
}

TEST(Algorithm1, GainShiftsBetaByFourteenSeventeenthsLog2) {
  std::mt19937_64 rng(305);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = random_segment(rng, 1.0);
    for (double c : {0.5, 0.6, 2.0}) {
      std::vector<double> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = c * x[i];
      const auto a = lipschitz_algorithm1(x, default_basis());
      const auto b = lipschitz_algorithm1(y, default_basis());
      ASSERT_EQ(a.valid, b.valid);
      if (!a.valid) continue;
      EXPECT_EQ(a.loc, b.loc);
      EXPECT_NEAR(b.beta_hat - a.beta_hat, 14.0 / 17.0 * std::log2(c), 1e-9);
    }
  }
}

TEST(Algorithm1, NeedsPeaksAtBothScales) {
  std::vector<double> ramp(32);
  for (std::size_t i = 0; i < 32; ++i) ramp[i] = static_cast<double>(i);
  EXPECT_FALSE(lipschitz_algorithm1(ramp, default_basis()).valid);
  EXPECT_FALSE(lipschitz_algorithm1(std::vector<double>(32, 9.8), default_basis()).valid);
}

TEST(Algorithm1, LocatesAPulse) {
  std::mt19937_64 rng(306);
  for (std::size_t centre : {6u, 11u, 16u, 21u, 26u}) {
    const auto e = lipschitz_algorithm1(pulse_segment(rng, centre, 3.0), default_basis());
    ASSERT_TRUE(e.valid);
    EXPECT_LE(std::abs(static_cast<long>(e.loc) - static_cast<long>(centre)), 4) << centre;
  }
}

TEST(Algorithm1, ExposesScaleThreePeaks) {
  std::mt19937_64 rng(307);
  const auto x = pulse_segment(rng, 16, 3.0);
  const auto e = lipschitz_algorithm1(x, default_basis());
  std::vector<double> d3;
  const WaveletCoeffs w = dwt(x, default_basis());
  for (double v : detail_scale(w, 3)) d3.push_back(std::abs(v));
  const auto o = oracle::findpeaks(d3);
  ASSERT_EQ(e.peaks[2].locs.size(), o.locs.size());
  for (std::size_t i = 0; i < o.locs.size(); ++i) EXPECT_EQ(static_cast<double>(e.peaks[2].locs[i] + 1), o.locs[i]);
}

TEST(Algorithm1, RejectsWrongLength) {
  EXPECT_THROW(lipschitz_algorithm1(std::vector<double>(16, 0.0), default_basis()), Error);
}

TEST(DetectBump, ThresholdAndSpeedGate) {
  LipschitzEstimate e;
  e.valid = true;
  e.beta_hat = -2.0;
  e.loc = 10;
  const Segment seg = segment_from(std::vector<double>(32, 0.0), 1000);
  BumpConfig cfg;
  cfg.beta_min = -3.0;

  const auto ev = detect_bump(e, 5.0, cfg, seg);
  ASSERT_TRUE(ev);
  EXPECT_EQ(ev->kind, EventKind::bump);
  EXPECT_EQ(ev->t_start, seg.time_of(10));
  EXPECT_EQ(ev->intensity, -2.0);

  EXPECT_FALSE(detect_bump(e, 0.0, cfg, seg));
  EXPECT_FALSE(detect_bump(e, 1.49, cfg, seg));
  EXPECT_TRUE(detect_bump(e, 1.5, cfg, seg));
  EXPECT_TRUE(detect_bump(e, std::nullopt, cfg, seg));
  cfg.allow_unknown_speed = false;
  EXPECT_FALSE(detect_bump(e, std::nullopt, cfg, seg));

  cfg.beta_min = -2.0;
  EXPECT_TRUE(detect_bump(e, 5.0, cfg, seg));
  cfg.beta_min = -1.999;
  EXPECT_FALSE(detect_bump(e, 5.0, cfg, seg));
  e.valid = false;
  cfg.beta_min = -100.0;
  EXPECT_FALSE(detect_bump(e, 5.0, cfg, seg));
}

TEST(DetectBump, RaisingThresholdNeverAddsEvents) {
  const auto trip = synth::generate_trip(testing_support::scenario("two_rough"));
  std::set<std::int64_t> prev;
  bool first = true;
  for (double beta_min = -8.0; beta_min <= 0.0; beta_min += 0.5) {
    PipelineConfig cfg;
    cfg.bump.beta_min = beta_min;
    cfg.bump.merge_window_ms = 0;  // compare raw detections
    std::set<std::int64_t> times;
    for (const auto& e : testing_support::of_kind(testing_support::analyze(trip, cfg), EventKind::bump)) {
      times.insert(e.t_start);
    }
    if (!first) {
      EXPECT_TRUE(std::includes(prev.begin(), prev.end(), times.begin(), times.end())) << beta_min;
    }
    prev = std::move(times);
    first = false;
  }
}

TEST(DetectBump, DefaultThresholdSeparatesLibraryAtEveryGain) {
  const auto cases = calibration::build_library();
  const BumpConfig cfg;
  for (const auto& c : cases) {
    const bool fired = c.valid && c.beta_hat >= cfg.beta_min;
    EXPECT_EQ(fired, c.has_bump) << "gain " << c.gain << " noise " << c.noise_g << " segment " << c.segment;
  }
}

TEST(DetectBump, CalibrationLandsOnDefault) {
  const auto cases = calibration::build_library();
  const auto cal = calibration::calibrate(cases);
  EXPECT_EQ(cal.best_f1, 1.0);
  EXPECT_NEAR(cal.beta_min, BumpConfig{}.beta_min, 1e-9);
}

TEST(MergeBumps, KeepsStrongestWithinWindow) {
  auto ev = [](std::int64_t t, double beta) {
    RoadEvent e;
    e.kind = EventKind::bump;
    e.t_start = e.t_end = t;
    e.intensity = beta;
    e.location = LatLon{0.0, t * 1e-6};
    return e;
  };
  const std::vector<RoadEvent> in{ev(1000, -3.0), ev(1500, -2.0), ev(2400, -2.5), ev(5000, -1.0)};
  const auto out = merge_bumps(in, 1000);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].t_start, 1000);
  EXPECT_EQ(out[0].t_end, 2400);
  EXPECT_EQ(out[0].intensity, -2.0);
  EXPECT_EQ(out[0].location->lon, 1500 * 1e-6);
  EXPECT_EQ(out[1].t_start, 5000);
  EXPECT_EQ(merge_bumps(in, 0).size(), 4u);
}

TEST(ZThreshold, FlagsSamplesAboveThreshold) {
  const std::vector<double> z{9.8, 25.0, 24.5, 30.0};
  const auto f = z_threshold_baseline(z, 24.5);
  EXPECT_EQ(f, (std::vector<bool>{false, true, false, true}));
}
