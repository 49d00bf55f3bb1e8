// roadsense: command-line front end for trip analysis, aggregation and
// synthetic trip generation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "roadsense/roadsense.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kFormatError = 2,
  kCorruptFile = 3,
};

int exit_code_for(roadsense::ErrorCode code) {
  switch (code) {
    case roadsense::ErrorCode::format:
    case roadsense::ErrorCode::ordering:
      return kFormatError;
    case roadsense::ErrorCode::corrupt_file:
      return kCorruptFile;
    default:
      return kFailure;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

struct AnalyzeArgs {
  std::string trip;
  std::string config;
  std::string out;
  std::string trip_id;
  std::string device_id = "unknown";
  bool diagnostics = false;
};

int run_analyze(const AnalyzeArgs& a) {
  const roadsense::PipelineConfig cfg = roadsense::resolve_config(a.config);
  std::ifstream in(a.trip, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + a.trip + "'");
  const std::string trip_id = a.trip_id.empty() ? std::filesystem::path(a.trip).stem().string() : a.trip_id;

  roadsense::TripPipeline::DiagnosticsSink diag;
  if (a.diagnostics) {
    diag = [](const roadsense::SegmentDiagnostics& d) { std::cerr << roadsense::diagnostics_line(d) << '\n'; };
  }
  const roadsense::TripReport report = roadsense::analyze_csv(in, cfg, trip_id, a.device_id, diag);
  write_output(a.out, roadsense::write_report(report));
  return kOk;
}

struct AggregateArgs {
  std::vector<std::string> reports;
  std::string out;
  std::string config;
  double radius_m = -1.0;
  long long min_trips = -1;
};

int run_aggregate(const AggregateArgs& a) {
  roadsense::PipelineConfig cfg = roadsense::resolve_config(a.config);
  if (a.radius_m > 0.0) cfg.aggregate.radius_m = a.radius_m;
  if (a.min_trips >= 0) cfg.aggregate.min_trips = static_cast<std::size_t>(a.min_trips);
  cfg.validate();

  std::vector<roadsense::TripReport> reports;
  for (const auto& path : a.reports) reports.push_back(roadsense::parse_report(read_file(path)));
  const auto clusters = roadsense::cluster_events(reports, cfg.aggregate.radius_m);
  const auto pruned = roadsense::prune_isolated(clusters, cfg.aggregate.min_trips);
  write_output(a.out, roadsense::write_map(pruned, cfg.aggregate.radius_m, cfg.aggregate.min_trips));
  return kOk;
}

struct SynthArgs {
  std::string scenario;
  std::string out;
  std::string labels;
};

int run_synth(const SynthArgs& a) {
  const auto scenario = roadsense::synth::parse_scenario(read_file(a.scenario));
  const auto trip = roadsense::synth::generate_trip(scenario);
  write_output(a.out, roadsense::synth::write_trip_csv(trip.samples, trip.fixes));
  std::string labels_path = a.labels;
  if (labels_path.empty() && a.out != "-") labels_path = a.out + ".labels.json";
  if (!labels_path.empty()) write_output(labels_path, roadsense::synth::write_labels(trip.labels));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Road roughness and bump detection from accelerometer + GPS trip logs"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "Print version and config schema version");

  AnalyzeArgs analyze;
  auto* cmd_analyze = app.add_subcommand("analyze", "Detect rough road and bumps in one trip");
  cmd_analyze->add_option("trip", analyze.trip, "Trip CSV (type,t_ms,a,b,c)")->required();
  cmd_analyze->add_option("--config", analyze.config, "Config file (overrides $ROADSENSE_CONFIG)");
  cmd_analyze->add_option("--out", analyze.out, "Report path (default: stdout)");
  cmd_analyze->add_option("--trip-id", analyze.trip_id, "Trip id (default: file stem)");
  cmd_analyze->add_option("--device-id", analyze.device_id, "Device id");
  cmd_analyze->add_flag("--diagnostics", analyze.diagnostics, "Per-segment diagnostics as JSON lines on stderr");

  AggregateArgs aggregate;
  auto* cmd_aggregate = app.add_subcommand("aggregate", "Merge trip reports into a confirmed hazard map");
  cmd_aggregate->add_option("reports", aggregate.reports, "Trip reports")->required();
  cmd_aggregate->add_option("--out", aggregate.out, "Map file")->required();
  cmd_aggregate->add_option("--config", aggregate.config, "Config file");
  cmd_aggregate->add_option("--radius", aggregate.radius_m, "Cluster radius in meters");
  cmd_aggregate->add_option("--min-trips", aggregate.min_trips, "Minimum supporting trips");

  SynthArgs synth;
  auto* cmd_synth = app.add_subcommand("synth", "Generate a synthetic trip with ground-truth labels");
  cmd_synth->add_option("scenario", synth.scenario, "Scenario file")->required();
  cmd_synth->add_option("--out", synth.out, "Trip CSV path")->required();
  cmd_synth->add_option("--labels", synth.labels, "Label file (default: <out>.labels.json)");

  CLI11_PARSE(app, argc, argv);

  if (show_version) {
    std::cout << "roadsense " << roadsense::kVersion << " (config schema " << roadsense::kConfigSchemaVersion
              << ")\n";
    return kOk;
  }
  try {
    if (cmd_analyze->parsed()) return run_analyze(analyze);
    if (cmd_aggregate->parsed()) return run_aggregate(aggregate);
    if (cmd_synth->parsed()) return run_synth(synth);
  } catch (const roadsense::Error& e) {
    std::cerr << "roadsense: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "roadsense: " << e.what() << '\n';
    return kFailure;
  }
  std::cout << app.help();
  return kFailure;
}
