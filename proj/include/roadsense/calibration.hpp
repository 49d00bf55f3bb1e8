#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "roadsense/config.hpp"
#include "roadsense/pipeline.hpp"
#include "roadsense/synth.hpp"

namespace roadsense::calibration {

/// One scored segment of the synthetic bump library.
struct LibraryCase {
  double gain = 1.0;
  double noise_g = 0.0;
  std::size_t segment = 0;
  bool has_bump = false;
  bool valid = false;
  double beta_hat = 0.0;
};

struct LibraryOptions {
  std::vector<double> gains{0.5, 0.6, 0.8, 1.0, 1.4, 2.0};
  std::vector<double> noise_levels_g{0.01, 0.02, 0.05};
  std::size_t bumps_per_trip = 30;
  std::uint64_t seed = 2024;
};

inline constexpr std::size_t kSegmentsBetweenBumps = 8;

/// Bump times for the library: one bump every 8 segments, centre placed well
/// inside its segment, heights 2-4 g and widths 4-8 samples in rotation.
inline std::vector<synth::BumpSpec> library_bumps(std::size_t count, double sample_rate_hz) {
  static constexpr int kOffsets[] = {10, 13, 16, 19, 22};
  static constexpr double kHeights[] = {2.0, 2.5, 3.0, 3.5, 4.0, 2.25, 3.25};
  static constexpr int kWidths[] = {4, 6, 8};
  std::vector<synth::BumpSpec> bumps;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t seg = kSegmentsBetweenBumps * k + 4;
    const auto index = static_cast<double>(seg * kSegmentLength + static_cast<std::size_t>(kOffsets[k % 5]));
    bumps.push_back({index / sample_rate_hz, kHeights[k % 7], kWidths[k % 3]});
  }
  return bumps;
}

/// Runs every (gain, noise) combination through the pipeline and labels the
/// segments: positive when it holds a bump centre, negative when no bump lies
/// within two segments, skipped otherwise.
inline std::vector<LibraryCase> build_library(const LibraryOptions& opt = {}) {
  std::vector<LibraryCase> out;
  PipelineConfig cfg;
  const auto bumps = library_bumps(opt.bumps_per_trip, cfg.sample_rate_hz);
  const std::size_t n_segments = kSegmentsBetweenBumps * opt.bumps_per_trip + 4;

  std::uint64_t seed = opt.seed;
  for (double noise : opt.noise_levels_g) {
    ++seed;
    for (double gain : opt.gains) {
      synth::Scenario sc;
      sc.trip_id = "library";
      sc.duration_s = static_cast<double>(n_segments * kSegmentLength) / cfg.sample_rate_hz;
      sc.device_gain = gain;
      sc.noise_sigma_g = noise;
      sc.bumps = bumps;
      sc.rng_seed = seed;  // same noise realisation across gains
      const auto trip = synth::generate_trip(sc);

      std::vector<LipschitzEstimate> per_segment;
      TripPipeline p(cfg, sc.trip_id);
      p.set_diagnostics([&](const SegmentDiagnostics& d) { per_segment.push_back(d.lipschitz); });
      for (const auto& s : trip.samples) p.push_sample(s);
      p.finish();

      std::vector<int> bump_segment(per_segment.size(), -1);
      for (const auto& b : trip.labels.bumps) {
        const auto sample = std::llround(static_cast<double>(b.t_ms) * cfg.sample_rate_hz / 1000.0);
        const auto seg = static_cast<std::size_t>(sample) / kSegmentLength;
        if (seg < bump_segment.size()) bump_segment[seg] = 1;
      }
      for (std::size_t i = 0; i < per_segment.size(); ++i) {
        bool near = false;
        for (std::size_t j = (i >= 2 ? i - 2 : 0); j <= std::min(i + 2, per_segment.size() - 1); ++j) {
          near = near || bump_segment[j] == 1;
        }
        const bool positive = bump_segment[i] == 1;
        if (!positive && near) continue;
        out.push_back({gain, noise, i, positive, per_segment[i].valid, per_segment[i].beta_hat});
      }
    }
  }
  return out;
}

struct Score {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  double f1() const {
    const double denom = 2.0 * static_cast<double>(tp) + static_cast<double>(fp + fn);
    return denom > 0.0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
  }
};

inline Score score(std::span<const LibraryCase> cases, double beta_min) {
  Score s;
  for (const auto& c : cases) {
    const bool fired = c.valid && c.beta_hat >= beta_min;
    if (fired && c.has_bump) ++s.tp;
    if (fired && !c.has_bump) ++s.fp;
    if (!fired && c.has_bump) ++s.fn;
  }
  return s;
}

struct Calibration {
  double beta_min = 0.0;
  double best_f1 = 0.0;
  double range_lo = 0.0;  // thresholds in [range_lo, range_hi] all reach best_f1
  double range_hi = 0.0;
};

/// Sweeps beta_min on a grid and returns the centre of the widest run of
/// thresholds reaching the best F1.
inline Calibration calibrate(std::span<const LibraryCase> cases, double lo = -10.0, double hi = 2.0,
                             double step = 0.01) {
  Calibration best;
  double run_start = 0.0;
  bool in_run = false;
  double best_width = -1.0;
  const auto steps = static_cast<std::size_t>((hi - lo) / step);
  for (std::size_t i = 0; i <= steps + 1; ++i) {
    const double t = lo + static_cast<double>(i) * step;
    const double f1 = i <= steps ? score(cases, t).f1() : -1.0;
    if (f1 > best.best_f1 + 1e-12) {
      best.best_f1 = f1;
      best_width = -1.0;
      run_start = t;
      in_run = true;
      continue;
    }
    const bool at_best = std::abs(f1 - best.best_f1) <= 1e-12;
    if (at_best && !in_run) {
      run_start = t;
      in_run = true;
    } else if (!at_best && in_run) {
      const double run_end = t - step;
      if (run_end - run_start > best_width) {
        best_width = run_end - run_start;
        best.range_lo = run_start;
        best.range_hi = run_end;
      }
      in_run = false;
    }
  }
  best.beta_min = std::round(0.5 * (best.range_lo + best.range_hi) * 100.0) / 100.0;
  return best;
}

}  // namespace roadsense::calibration
