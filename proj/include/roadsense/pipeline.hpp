#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roadsense/bump.hpp"
#include "roadsense/config.hpp"
#include "roadsense/error.hpp"
#include "roadsense/events.hpp"
#include "roadsense/geo.hpp"
#include "roadsense/gravity_filter.hpp"
#include "roadsense/roughness.hpp"
#include "roadsense/signal.hpp"
#include "roadsense/wavelet.hpp"

namespace roadsense {

/// Per-segment values exposed for diagnostics output.
struct SegmentDiagnostics {
  std::size_t index = 0;
  std::int64_t t_start = 0;
  std::int64_t t_end = 0;
  double sigma_hat = 0.0;
  double cost = 0.0;
  int level = 0;
  double alpha = 0.0;
  LipschitzEstimate lipschitz;
};

/// Sizes of the pipeline's internal buffers. None of them grows with trip
/// length; retained fixes grow only with the duration of an open rough event.
struct Footprint {
  std::size_t buffered_samples = 0;
  std::size_t retained_fixes = 0;
  std::size_t pending_events = 0;
};

/// Single-pass trip analysis:
/// filter -> magnitude -> segment -> dwt -> {roughness, Lipschitz} -> geo-tag -> merge.
///
/// Samples and fixes may be pushed interleaved in any order consistent with
/// their own timestamps; the report does not depend on the interleaving.
class TripPipeline {
 public:
  using DiagnosticsSink = std::function<void(const SegmentDiagnostics&)>;

  TripPipeline(PipelineConfig cfg, std::string trip_id, std::string device_id = "unknown")
      : cfg_(std::move(cfg)),
        trip_id_(std::move(trip_id)),
        device_id_(std::move(device_id)),
        segmenter_(cfg_.segment_overlap),
        rough_tracker_(cfg_.roughness.hold_off_segments) {
    cfg_.validate();
    filter_ = make_filter_state(cfg_.roughness.alpha_levels[0]);
    roughness_ = make_roughness_state(cfg_.roughness);
    gap_reset_ms_ = cfg_.gap_reset_periods * make_sample_rate(cfg_.sample_rate_hz).period_ms();
  }

  void set_diagnostics(DiagnosticsSink sink) { diagnostics_ = std::move(sink); }

  void push_sample(const AccelSample& s) {
    if (last_sample_t_) {
      if (s.t_ms < *last_sample_t_) throw Error(ErrorCode::ordering, "accelerometer timestamps decrease");
      if (static_cast<double>(s.t_ms - *last_sample_t_) > gap_reset_ms_) {
        filter_ = reseed(filter_);
        stats_.dropped_samples += segmenter_.reset();
      }
    }
    last_sample_t_ = s.t_ms;

    auto [state, filtered] = filter_step(filter_, s);
    filter_ = state;
    if (auto seg = segmenter_.push({s.t_ms, gravity_magnitude(filtered)})) {
      try {
        process_segment(*seg);
      } catch (const Error& e) {
        throw Error(e.code(), "segment " + std::to_string(seg->index) + ": " + e.what());
      }
    }
  }

  void push_fix(const GpsFix& f) {
    if (!fixes_.empty()) {
      if (f.t_ms < fixes_.back().t_ms) throw Error(ErrorCode::ordering, "GPS timestamps decrease");
      if (f.t_ms - fixes_.back().t_ms > cfg_.max_gps_gap_ms) ++stats_.gps_gap_count;
    }
    fixes_.push_back(f);
    resolve_pending(/*final=*/false);
  }

  /// Flushes open state and returns the report. The pipeline must not be used afterwards.
  TripReport finish(std::size_t malformed_rows = 0) {
    if (auto ev = rough_tracker_.finish()) enqueue(*ev, ev->t_start);
    stats_.dropped_samples += segmenter_.reset();
    resolve_pending(/*final=*/true);

    std::vector<RoadEvent> merged = merge_bumps(bumps_, cfg_.bump.merge_window_ms);
    std::vector<RoadEvent> events = std::move(roughs_);
    events.insert(events.end(), merged.begin(), merged.end());
    std::stable_sort(events.begin(), events.end(), [](const RoadEvent& a, const RoadEvent& b) {
      if (a.t_start != b.t_start) return a.t_start < b.t_start;
      return a.kind < b.kind;
    });
    for (auto& ev : events) ev.trip_id = trip_id_;

    TripReport report;
    report.trip_id = trip_id_;
    report.device_id = device_id_;
    report.sample_rate_hz = cfg_.sample_rate_hz;
    report.events = std::move(events);
    report.stats = stats_;
    report.stats.segment_count = segmenter_.segments_emitted();
    report.stats.malformed_rows = malformed_rows;
    return report;
  }

  Footprint footprint() const { return {segmenter_.pending(), fixes_.size(), pending_.size()}; }

 private:
  struct Pending {
    RoadEvent event;
    std::int64_t anchor_t = 0;  // time used for location and speed
    // bump candidates keep their segment so detect_bump can stamp the event
    std::optional<Segment> segment;
    LipschitzEstimate estimate;
  };

  void process_segment(const Segment& seg) {
    const HaarBasis& basis = default_basis();
    const WaveletCoeffs coeffs = dwt(seg, basis);

    const Classification cls = classify_segment(roughness_, seg, coeffs, cfg_.roughness);
    roughness_ = cls.state;
    filter_ = set_alpha(filter_, cls.alpha);
    if (auto ev = rough_tracker_.feed(seg, cls.level)) enqueue(*ev, ev->t_start);

    const LipschitzEstimate est = lipschitz_algorithm1(seg, basis, cfg_.bump.peak_policy);
    if (est.valid && est.beta_hat >= cfg_.bump.beta_min) {
      RoadEvent candidate;
      candidate.kind = EventKind::bump;
      const std::int64_t t = singularity_time(est, seg);
      pending_.push_back({candidate, t, seg, est});
      resolve_pending(/*final=*/false);
    }
    if (diagnostics_) {
      diagnostics_(SegmentDiagnostics{seg.index, seg.t_start, seg.t_end, cls.sigma_hat, cls.cost, cls.level,
                                      cls.alpha, est});
    }
    prune_fixes();
  }

  void enqueue(const RoadEvent& ev, std::int64_t anchor) {
    pending_.push_back({ev, anchor, std::nullopt, {}});
    resolve_pending(/*final=*/false);
  }

  // An event is resolved once a fix after its anchor exists, so the bracketing
  // pair is final; at the end of the trip everything is resolved.
  void resolve_pending(bool final) {
    while (!pending_.empty()) {
      Pending& p = pending_.front();
      if (!final && (fixes_.empty() || fixes_.back().t_ms <= p.anchor_t)) break;
      std::span<const GpsFix> fixes(fixes_);
      RoadEvent ev = p.event;
      ev.location = locate(fixes, p.anchor_t, cfg_.max_gps_gap_ms);
      if (p.segment) {
        std::optional<double> speed;
        if (fixes.size() >= 2) speed = speed_at(fixes, p.anchor_t);
        if (auto gated = detect_bump(p.estimate, speed, cfg_.bump, *p.segment)) {
          gated->location = ev.location;
          bumps_.push_back(*gated);
        }
      } else {
        roughs_.push_back(ev);
      }
      pending_.pop_front();
    }
  }

  // Keeps only the fixes that a future resolution can still touch.
  void prune_fixes() {
    if (fixes_.size() < 4 || !last_sample_t_) return;
    std::int64_t horizon = *last_sample_t_ - static_cast<std::int64_t>(2 * kSegmentLength * gap_reset_ms_);
    if (!pending_.empty()) horizon = std::min(horizon, pending_.front().anchor_t);
    if (auto open = rough_tracker_.open_start()) horizon = std::min(horizon, *open);
    std::size_t keep = 0;
    while (keep + 1 < fixes_.size() && fixes_[keep + 1].t_ms <= horizon) ++keep;
    // two extra fixes before the bracketing one cover duplicated timestamps
    keep = keep >= 2 ? keep - 2 : 0;
    fixes_.erase(fixes_.begin(), fixes_.begin() + static_cast<std::ptrdiff_t>(keep));
  }

  PipelineConfig cfg_;
  std::string trip_id_;
  std::string device_id_;
  Segmenter segmenter_;
  RoughEventTracker rough_tracker_;
  FilterState filter_;
  RoughnessState roughness_;
  double gap_reset_ms_ = 60.0;
  std::optional<std::int64_t> last_sample_t_;
  std::vector<GpsFix> fixes_;
  std::deque<Pending> pending_;
  std::vector<RoadEvent> bumps_;
  std::vector<RoadEvent> roughs_;
  TripStats stats_;
  DiagnosticsSink diagnostics_;
};

/// Convenience wrapper over TripPipeline for in-memory inputs.
inline TripReport run_pipeline(std::span<const AccelSample> samples, std::span<const GpsFix> fixes,
                               const PipelineConfig& cfg, const std::string& trip_id = "trip",
                               const std::string& device_id = "unknown", std::size_t malformed_rows = 0) {
  TripPipeline p(cfg, trip_id, device_id);
  std::size_t gi = 0;
  for (const auto& s : samples) {
    while (gi < fixes.size() && fixes[gi].t_ms <= s.t_ms) p.push_fix(fixes[gi++]);
    p.push_sample(s);
  }
  while (gi < fixes.size()) p.push_fix(fixes[gi++]);
  return p.finish(malformed_rows);
}

}  // namespace roadsense
