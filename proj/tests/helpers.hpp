#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "roadsense/calibration.hpp"
#include "roadsense/oracle.hpp"
#include "roadsense/roadsense.hpp"

namespace testing_support {

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline roadsense::synth::Scenario scenario(const std::string& name) {
  return roadsense::synth::parse_scenario(read_text(std::string(ROADSENSE_SCENARIO_DIR) + "/" + name + ".json"));
}

inline std::vector<double> random_segment(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> x(roadsense::kSegmentLength);
  for (auto& v : x) v = g(rng);
  return x;
}

inline roadsense::TripReport analyze(const roadsense::synth::SyntheticTrip& trip,
                                     const roadsense::PipelineConfig& cfg = {}, const std::string& id = "trip") {
  return roadsense::run_pipeline(trip.samples, trip.fixes, cfg, id);
}

inline std::vector<roadsense::RoadEvent> of_kind(const roadsense::TripReport& r, roadsense::EventKind k) {
  std::vector<roadsense::RoadEvent> out;
  for (const auto& e : r.events) {
    if (e.kind == k) out.push_back(e);
  }
  return out;
}

struct BumpMatch {
  std::size_t hits = 0;
  std::size_t false_positives = 0;
  std::vector<bool> found;
};

// A labelled bump counts as found when a detected bump lies within tol_ms of
// its centre; each detection is used at most once.
inline BumpMatch match_bumps(const std::vector<roadsense::RoadEvent>& detected,
                             const std::vector<roadsense::synth::BumpLabel>& labels, std::int64_t tol_ms = 700) {
  BumpMatch m;
  m.found.assign(labels.size(), false);
  std::vector<bool> used(detected.size(), false);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = 0; j < detected.size(); ++j) {
      if (used[j]) continue;
      if (std::llabs(detected[j].t_start - labels[i].t_ms) <= tol_ms) {
        used[j] = true;
        m.found[i] = true;
        ++m.hits;
        break;
      }
    }
  }
  for (bool u : used) m.false_positives += u ? 0 : 1;
  return m;
}

}  // namespace testing_support
