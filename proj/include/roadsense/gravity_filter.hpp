#pragma once

#include <cmath>
#include <utility>

#include "roadsense/error.hpp"
#include "roadsense/signal.hpp"

namespace roadsense {

inline constexpr double kDefaultAlpha = 0.992;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Per-axis state of the first-order IIR low-pass.
struct FilterState {
  double gx = 0.0;
  double gy = 0.0;
  double gz = 0.0;
  double alpha = kDefaultAlpha;
  bool initialized = false;
};

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::configuration, "smoothing factor must lie in (0, 1)");
  }
}

inline FilterState make_filter_state(double alpha = kDefaultAlpha) {
  check_alpha(alpha);
  return FilterState{0.0, 0.0, 0.0, alpha, false};
}

/// g' = alpha * g + (1 - alpha) * a on every axis. The first sample after
/// construction (or reseed) becomes the state verbatim.
inline std::pair<FilterState, Vec3> filter_step(FilterState state, const AccelSample& sample) {
  check_alpha(state.alpha);
  if (!std::isfinite(sample.ax) || !std::isfinite(sample.ay) || !std::isfinite(sample.az)) {
    throw Error(ErrorCode::invalid_sample, "non-finite acceleration component");
  }
  if (!state.initialized) {
    state.gx = sample.ax;
    state.gy = sample.ay;
    state.gz = sample.az;
    state.initialized = true;
  } else {
    const double a = state.alpha;
    const double b = 1.0 - a;
    state.gx = a * state.gx + b * sample.ax;
    state.gy = a * state.gy + b * sample.ay;
    state.gz = a * state.gz + b * sample.az;
  }
  return {state, Vec3{state.gx, state.gy, state.gz}};
}

inline double gravity_magnitude(const Vec3& filtered) {
  return resultant_magnitude(filtered.x, filtered.y, filtered.z);
}

/// Takes effect at the next sample; filter memory is kept.
inline FilterState set_alpha(FilterState state, double alpha) {
  check_alpha(alpha);
  state.alpha = alpha;
  return state;
}

/// Forces the next filter_step to seed from its raw sample.
inline FilterState reseed(FilterState state) {
  state.initialized = false;
  return state;
}

}  // namespace roadsense
