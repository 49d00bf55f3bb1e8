#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "roadsense/error.hpp"
#include "roadsense/events.hpp"
#include "roadsense/signal.hpp"
#include "roadsense/wavelet.hpp"

namespace roadsense {

/// Output of the modulus-maxima regularity estimate for one segment.
struct LipschitzEstimate {
  double beta_hat = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  std::size_t loc = 0;  // sample index of the singularity within the segment
  bool valid = false;

  // per-scale peak sets (scales 1..3), kept for diagnostics
  std::array<Peaks, 3> peaks;
};

/// Detection thresholds. A segment is reported as a bump when its estimate is
/// valid, beta_hat >= beta_min and the rider is moving at >= min_speed.
struct BumpConfig {
  double beta_min = -3.99;
  double min_speed = 1.5;
  bool allow_unknown_speed = true;
  std::int64_t merge_window_ms = 1000;
  double z_threshold = 2.5 * kGravity;
  PeakPolicy peak_policy = PeakPolicy::strict;

  void validate() const {
    if (!std::isfinite(beta_min)) throw Error(ErrorCode::configuration, "beta_min must be finite");
    if (!(min_speed >= 0.0)) throw Error(ErrorCode::configuration, "min_speed must be non-negative");
    if (merge_window_ms < 0) throw Error(ErrorCode::configuration, "merge window must be non-negative");
  }
};

struct ScaleModulus {
  double scale = 1.0;
  double magnitude = 0.0;
};

struct LogLinearFit {
  double amplitude = 0.0;  // A
  double beta = 0.0;
};

/// Least-squares fit of log2 a = log2 A + beta * log2 j over (j, a_j) pairs,
/// solved through the 2x2 normal equations.
inline LogLinearFit lipschitz_lsq(std::span<const ScaleModulus> moduli) {
  if (moduli.size() < 2) throw Error(ErrorCode::degenerate_fit, "need at least two scales");
  double n = 0.0, sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
  for (const auto& m : moduli) {
    if (!(m.magnitude > 0.0) || !(m.scale > 0.0)) {
      throw Error(ErrorCode::domain, "scales and moduli must be positive");
    }
    const double x = std::log2(m.scale);
    const double y = std::log2(m.magnitude);
    n += 1.0;
    sx += x;
    sxx += x * x;
    sy += y;
    sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  // det is n^2 times the variance of log2 j; zero iff every scale is the same
  if (!(std::abs(det) > 1e-12 * std::max(1.0, n * sxx))) {
    throw Error(ErrorCode::degenerate_fit, "all scales identical");
  }
  const double intercept = (sxx * sy - sx * sxy) / det;
  const double slope = (n * sxy - sx * sy) / det;
  return LogLinearFit{std::exp2(intercept), slope};
}

namespace detail {

struct Matrix2 {
  double a11, a12, a21, a22;
};

constexpr Matrix2 inverse(const Matrix2& m) {
  const double det = m.a11 * m.a22 - m.a12 * m.a21;
  return {m.a22 / det, -m.a12 / det, -m.a21 / det, m.a11 / det};
}

inline std::vector<double> abs_values(std::span<const double> xs) {
  std::vector<double> out(xs.size());
  std::transform(xs.begin(), xs.end(), out.begin(), [](double v) { return std::abs(v); });
  return out;
}

}  // namespace detail

/// Regularity estimate from the modulus maxima at the two finest scales.
///
/// P1 is the largest scale-1 peak of |d_1,k|; P2 is the scale-2 peak whose
/// normalised position is closest to P1's (earlier index on ties). Positions
/// are normalised 1-based indices (k+1)/16 and (k+1)/8, which align the right
/// edges of the supports. beta_hat = M21 (log2 P1 + log2 P2) + 7 M22 (log2 P1 +
/// log2 P2) with M = [[4, 7], [7, 25]]^-1. Scale 3 peaks are computed and
/// reported but do not enter beta_hat.
inline LipschitzEstimate lipschitz_algorithm1(std::span<const double> values, const HaarBasis& basis,
                                              PeakPolicy policy = PeakPolicy::strict) {
  if (values.size() != kSegmentLength || basis.size != kSegmentLength) {
    throw Error(ErrorCode::shape, "Lipschitz estimate needs a 32-point segment");
  }
  constexpr detail::Matrix2 m = detail::inverse({4.0, 7.0, 7.0, 25.0});

  const WaveletCoeffs coeffs = dwt(values, basis);
  LipschitzEstimate est;
  for (std::size_t j = 1; j <= 3; ++j) {
    const auto mags = detail::abs_values(detail_scale(coeffs, j));
    est.peaks[j - 1] = find_peaks(mags, policy);
  }
  const Peaks& pk1 = est.peaks[0];
  const Peaks& pk2 = est.peaks[1];
  if (pk1.empty() || pk2.empty()) return est;

  const auto i1 = static_cast<std::size_t>(
      std::distance(pk1.values.begin(), std::max_element(pk1.values.begin(), pk1.values.end())));
  const std::size_t location = pk1.locs[i1];
  const double normloc1 = static_cast<double>(location + 1) / 16.0;

  std::size_t i2 = 0;
  double best = INFINITY;
  for (std::size_t i = 0; i < pk2.locs.size(); ++i) {
    const double d = std::abs(static_cast<double>(pk2.locs[i] + 1) / 8.0 - normloc1);
    if (d < best) {
      best = d;
      i2 = i;
    }
  }

  est.p1 = pk1.values[i1];
  est.p2 = pk2.values[i2];
  const double logs = std::log2(est.p1) + std::log2(est.p2);
  est.beta_hat = m.a21 * logs + m.a22 * 7.0 * logs;
  est.loc = 2 * location;
  est.valid = true;
  return est;
}

inline LipschitzEstimate lipschitz_algorithm1(const Segment& segment, const HaarBasis& basis = default_basis(),
                                              PeakPolicy policy = PeakPolicy::strict) {
  return lipschitz_algorithm1(std::span<const double>(segment.values), basis, policy);
}

/// Speed gate plus threshold. speed is nullopt when GPS could not provide one.
inline std::optional<RoadEvent> detect_bump(const LipschitzEstimate& est, std::optional<double> speed,
                                            const BumpConfig& cfg, const Segment& segment) {
  if (!est.valid || !(est.beta_hat >= cfg.beta_min)) return std::nullopt;
  if (speed) {
    if (*speed < cfg.min_speed) return std::nullopt;
  } else if (!cfg.allow_unknown_speed) {
    return std::nullopt;
  }
  RoadEvent ev;
  ev.kind = EventKind::bump;
  ev.t_start = ev.t_end = segment.time_of(est.loc);
  ev.intensity = est.beta_hat;
  return ev;
}

/// Time of the singularity for a segment estimate (what detect_bump stamps).
inline std::int64_t singularity_time(const LipschitzEstimate& est, const Segment& segment) {
  return segment.time_of(est.loc);
}

/// Baseline: flags every raw z-axis sample above the threshold.
inline std::vector<bool> z_threshold_baseline(std::span<const double> z, double threshold) {
  std::vector<bool> flags(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) flags[i] = z[i] > threshold;
  return flags;
}

/// Collapses bump events closer than `window_ms` (measured from the previous
/// member) into one event spanning the group; the strongest estimate is kept
/// as intensity. Input must be sorted by t_start.
inline std::vector<RoadEvent> merge_bumps(std::span<const RoadEvent> bumps, std::int64_t window_ms) {
  std::vector<RoadEvent> out;
  for (const auto& ev : bumps) {
    if (!out.empty() && ev.t_start - out.back().t_end <= window_ms) {
      RoadEvent& cur = out.back();
      cur.t_end = std::max(cur.t_end, ev.t_end);
      if (ev.intensity > cur.intensity) {
        cur.intensity = ev.intensity;
        cur.location = ev.location;
      }
      continue;
    }
    out.push_back(ev);
  }
  return out;
}

}  // namespace roadsense
