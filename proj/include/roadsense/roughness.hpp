#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "roadsense/error.hpp"
#include "roadsense/events.hpp"
#include "roadsense/signal.hpp"
#include "roadsense/wavelet.hpp"

namespace roadsense {

/// Consistency constant of the MAD for Gaussian data.
inline constexpr double kMadGaussian = 0.6745;

struct NoiseEstimate {
  double sigma_hat = 0.0;
  std::size_t segment_index = 0;
};

/// Four-level alpha schedule. Level i > 0 is chosen when J >= thresholds[i-1] * l
/// and no higher level qualifies; level 0 otherwise.
struct RoughnessConfig {
  double lambda = 0.9;
  std::size_t taps = 8;
  std::array<double, 4> alpha_levels{0.992, 0.995, 0.996, 0.998};
  std::array<double, 3> thresholds_per_tap{0.007, 0.008, 0.01};
  std::size_t hold_off_segments = 4;
  double sigma_normalization = kGravity;

  void validate() const {
    if (!(lambda > 0.0 && lambda <= 1.0)) {
      throw Error(ErrorCode::configuration, "forgetting factor must lie in (0, 1]");
    }
    if (taps < 1) throw Error(ErrorCode::configuration, "tap count must be positive");
    for (std::size_t i = 0; i < alpha_levels.size(); ++i) {
      if (!(alpha_levels[i] > 0.0 && alpha_levels[i] < 1.0)) {
        throw Error(ErrorCode::configuration, "alpha levels must lie in (0, 1)");
      }
      if (i > 0 && !(alpha_levels[i] > alpha_levels[i - 1])) {
        throw Error(ErrorCode::configuration, "alpha levels must be increasing");
      }
    }
    for (std::size_t i = 0; i < thresholds_per_tap.size(); ++i) {
      if (!(thresholds_per_tap[i] >= 0.0)) {
        throw Error(ErrorCode::configuration, "thresholds must be non-negative");
      }
      if (i > 0 && !(thresholds_per_tap[i] > thresholds_per_tap[i - 1])) {
        throw Error(ErrorCode::configuration, "thresholds must be increasing");
      }
    }
    if (!(sigma_normalization > 0.0)) {
      throw Error(ErrorCode::configuration, "sigma normalization must be positive");
    }
  }
};

struct RoughnessState {
  std::deque<NoiseEstimate> history;  // front is newest
  double lambda = 0.9;
  std::size_t taps = 8;
  double alpha = 0.992;
  int level = 0;
};

inline RoughnessState make_roughness_state(const RoughnessConfig& cfg) {
  cfg.validate();
  return RoughnessState{{}, cfg.lambda, cfg.taps, cfg.alpha_levels[0], 0};
}

/// Median of an even-length array is the mean of the two central values.
inline double median_of(std::vector<double> v) {
  if (v.empty()) throw Error(ErrorCode::insufficient_data, "median of empty set");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

/// median(|finest details|) / 0.6745
inline double estimate_sigma(const WaveletCoeffs& coeffs) {
  const auto finest = detail_scale(coeffs, 1);
  std::vector<double> mags(finest.size());
  std::transform(finest.begin(), finest.end(), mags.begin(), [](double d) { return std::abs(d); });
  return median_of(std::move(mags)) / kMadGaussian;
}

/// J = sum_i lambda^i * sigma[newest - i] over at most `taps` entries.
inline double cost(const RoughnessState& state) {
  if (state.history.empty()) {
    throw Error(ErrorCode::insufficient_data, "cost needs at least one noise estimate");
  }
  const std::size_t n = std::min(state.taps, state.history.size());
  double j = 0.0;
  double w = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    j += w * state.history[i].sigma_hat;
    w *= state.lambda;
  }
  return j;
}

/// Roughness level for a cost value; boundaries belong to the higher level.
inline int roughness_level(double j, std::size_t taps, const RoughnessConfig& cfg = {}) {
  const double l = static_cast<double>(taps);
  for (int lvl = 3; lvl >= 1; --lvl) {
    if (j >= cfg.thresholds_per_tap[static_cast<std::size_t>(lvl - 1)] * l) return lvl;
  }
  return 0;
}

inline double update_alpha(double j, std::size_t taps, const RoughnessConfig& cfg = {}) {
  return cfg.alpha_levels[static_cast<std::size_t>(roughness_level(j, taps, cfg))];
}

struct Classification {
  RoughnessState state;
  int level = 0;
  double alpha = 0.0;
  double sigma_hat = 0.0;
  double cost = 0.0;
};

/// Pushes the segment's noise estimate, re-evaluates J and selects the next
/// alpha. The caller forwards `alpha` to the gravity filter.
inline Classification classify_segment(RoughnessState state, const Segment& segment,
                                       const WaveletCoeffs& coeffs, const RoughnessConfig& cfg = {}) {
  const double sigma = estimate_sigma(coeffs);
  state.history.push_front(NoiseEstimate{sigma / cfg.sigma_normalization, segment.index});
  while (state.history.size() > state.taps) state.history.pop_back();

  const double j = cost(state);
  state.level = roughness_level(j, state.taps, cfg);
  state.alpha = cfg.alpha_levels[static_cast<std::size_t>(state.level)];
  return Classification{state, state.level, state.alpha, sigma, j};
}

/// Turns the per-segment level sequence into rough-road events. An event opens
/// on the first non-zero level and closes after `hold_off` consecutive zero
/// levels; its span ends with the last non-zero segment.
class RoughEventTracker {
 public:
  explicit RoughEventTracker(std::size_t hold_off) : hold_off_(std::max<std::size_t>(hold_off, 1)) {}

  std::optional<RoadEvent> feed(const Segment& segment, int level) {
    if (level > 0) {
      if (!open_) {
        open_ = true;
        current_ = RoadEvent{};
        current_.kind = EventKind::rough;
        current_.t_start = segment.t_start;
        current_.intensity = 0.0;
      }
      current_.t_end = segment.t_end;
      current_.intensity = std::max(current_.intensity, static_cast<double>(level));
      quiet_ = 0;
      return std::nullopt;
    }
    if (open_ && ++quiet_ >= hold_off_) return close();
    return std::nullopt;
  }

  std::optional<RoadEvent> finish() {
    if (open_) return close();
    return std::nullopt;
  }

  bool open() const { return open_; }

  std::optional<std::int64_t> open_start() const {
    if (!open_) return std::nullopt;
    return current_.t_start;
  }

 private:
  RoadEvent close() {
    open_ = false;
    quiet_ = 0;
    return current_;
  }

  std::size_t hold_off_;
  bool open_ = false;
  std::size_t quiet_ = 0;
  RoadEvent current_;
};

}  // namespace roadsense
