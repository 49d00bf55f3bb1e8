#pragma once

#include <istream>
#include <string>

#include "json.hpp"
#include "roadsense/config.hpp"
#include "roadsense/pipeline.hpp"
#include "roadsense/trip_io.hpp"

namespace roadsense {

/// Streams a trip CSV straight into a TripPipeline without buffering rows.
inline TripReport analyze_csv(std::istream& in, const PipelineConfig& cfg, const std::string& trip_id,
                              const std::string& device_id = "unknown",
                              TripPipeline::DiagnosticsSink diagnostics = {}) {
  struct Forward : TripRowSink {
    TripPipeline* p;
    void on_sample(const AccelSample& s) override { p->push_sample(s); }
    void on_fix(const GpsFix& f) override { p->push_fix(f); }
  };
  TripPipeline pipeline(cfg, trip_id, device_id);
  if (diagnostics) pipeline.set_diagnostics(std::move(diagnostics));
  Forward sink;
  sink.p = &pipeline;
  const CsvReadStats stats = read_trip_csv(in, sink);
  return pipeline.finish(stats.malformed_rows);
}

/// One JSON line per segment for the diagnostics stream.
inline std::string diagnostics_line(const SegmentDiagnostics& d) {
  nlohmann::ordered_json j;
  j["segment"] = d.index;
  j["t_start_ms"] = d.t_start;
  j["t_end_ms"] = d.t_end;
  j["sigma_hat"] = d.sigma_hat;
  j["cost"] = d.cost;
  j["level"] = d.level;
  j["alpha"] = d.alpha;
  j["valid"] = d.lipschitz.valid;
  j["beta_hat"] = d.lipschitz.valid ? nlohmann::ordered_json(d.lipschitz.beta_hat) : nlohmann::ordered_json();
  j["p1"] = d.lipschitz.p1;
  j["p2"] = d.lipschitz.p2;
  for (std::size_t s = 0; s < d.lipschitz.peaks.size(); ++s) {
    const auto& pk = d.lipschitz.peaks[s];
    j["peaks" + std::to_string(s + 1)] = {{"values", pk.values}, {"locs", pk.locs}};
  }
  return j.dump();
}

}  // namespace roadsense
