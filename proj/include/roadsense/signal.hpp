#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "roadsense/error.hpp"

namespace roadsense {

/// Standard gravity as used throughout the pipeline (1 g).
inline constexpr double kGravity = 9.8;

/// Window length of the wavelet analysis.
inline constexpr std::size_t kSegmentLength = 32;

/// One accelerometer reading in device axes. t_ms is relative to trip start.
struct AccelSample {
  std::int64_t t_ms = 0;
  double ax = 0.0;
  double ay = 0.0;
  double az = 0.0;
};

struct SampleRate {
  double hz = 50.0;

  constexpr double period_ms() const { return 1000.0 / hz; }
};

inline SampleRate make_sample_rate(double hz) {
  if (!(hz > 0.0) || !std::isfinite(hz)) {
    throw Error(ErrorCode::configuration, "sample rate must be positive");
  }
  return SampleRate{hz};
}

/// A filtered magnitude with its timestamp.
struct TimedValue {
  std::int64_t t_ms = 0;
  double value = 0.0;
};

/// Fixed-length window of filtered resultant acceleration.
struct Segment {
  std::size_t index = 0;
  std::array<double, kSegmentLength> values{};
  std::int64_t t_start = 0;
  std::int64_t t_end = 0;

  /// Timestamp of sample `i`, interpolated across the window span.
  std::int64_t time_of(std::size_t i) const {
    const double frac = static_cast<double>(i) / static_cast<double>(kSegmentLength - 1);
    return t_start + static_cast<std::int64_t>(std::llround(frac * static_cast<double>(t_end - t_start)));
  }
};

inline double resultant_magnitude(double ax, double ay, double az) {
  if (!std::isfinite(ax) || !std::isfinite(ay) || !std::isfinite(az)) {
    throw Error(ErrorCode::invalid_sample, "non-finite acceleration component");
  }
  return std::sqrt(ax * ax + ay * ay + az * az);
}

inline double resultant_magnitude(const AccelSample& s) {
  return resultant_magnitude(s.ax, s.ay, s.az);
}

/// Incremental windowing of a magnitude stream. With overlap 0 the windows tile
/// the input; a trailing remainder never forms a segment.
class Segmenter {
 public:
  explicit Segmenter(std::size_t overlap = 0) : overlap_(overlap) {
    if (overlap_ >= kSegmentLength) {
      throw Error(ErrorCode::configuration, "segment overlap must be smaller than the window");
    }
  }

  /// Appends one value; returns a segment when a window completes.
  std::optional<Segment> push(TimedValue v) {
    buffer_[fill_++] = v;
    ++fresh_;
    if (fill_ < kSegmentLength) return std::nullopt;

    Segment seg;
    seg.index = next_index_++;
    for (std::size_t i = 0; i < kSegmentLength; ++i) seg.values[i] = buffer_[i].value;
    seg.t_start = buffer_.front().t_ms;
    seg.t_end = buffer_.back().t_ms;
    if (seg.t_start >= seg.t_end) {
      throw Error(ErrorCode::invalid_sample, "segment spans zero time");
    }

    // keep the overlapping tail as the head of the next window
    const std::size_t hop = kSegmentLength - overlap_;
    for (std::size_t i = 0; i < overlap_; ++i) buffer_[i] = buffer_[hop + i];
    fill_ = overlap_;
    fresh_ = 0;
    return seg;
  }

  /// Discards the partial window; returns how many samples were dropped.
  std::size_t reset() {
    const std::size_t dropped = fresh_;
    fill_ = 0;
    fresh_ = 0;
    return dropped;
  }

  std::size_t pending() const { return fill_; }
  std::size_t segments_emitted() const { return next_index_; }

 private:
  std::size_t overlap_;
  std::array<TimedValue, kSegmentLength> buffer_{};
  std::size_t fill_ = 0;
  std::size_t fresh_ = 0;  // buffered samples not yet part of any emitted segment
  std::size_t next_index_ = 0;
};

inline std::vector<Segment> segment_stream(std::span<const TimedValue> magnitudes, std::size_t overlap = 0) {
  Segmenter seg(overlap);
  std::vector<Segment> out;
  out.reserve(magnitudes.size() / kSegmentLength);
  for (const auto& v : magnitudes) {
    if (auto s = seg.push(v)) out.push_back(*s);
  }
  return out;
}

}  // namespace roadsense
