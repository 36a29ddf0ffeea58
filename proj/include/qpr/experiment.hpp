#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpr/jet.hpp"
#include "qpr/solvers.hpp"
#include "qpr/track.hpp"
#include "qpr/vertex.hpp"

namespace qpr::bench {

/// Problem input: exactly one of `file` or the random generator.
struct ProblemSource {
  std::string file;
  bool random = false;
  std::size_t random_n = 12;
  double random_density = 0.5;
  std::uint64_t random_seed = 1;

  std::string label() const;
};

struct SolveTask {
  ProblemSource problem;
  std::string trace_output;  // optional sidecar prefix
};

struct TrackTask {
  std::size_t events = 20;
  std::size_t particles = 50;
  track::DetectorModel detector = track::DetectorModel::barrel();
  std::string segment = "triplet";  // or "doublet"
  track::DoubletCuts cuts;
  track::TripletCuts triplet_cuts;
  track::TripletQuboParams triplet_qubo;
  track::DpParams dp;
  std::uint64_t event_seed = 1;
  std::string hits_file;  // alternative to the generator (single event)
};

struct JetsTask {
  std::size_t events = 50;
  std::size_t n_jet = 4;
  double sqrt_s = 400.0;
  double spread = 0.05;
  std::size_t constituents_per_jet = 10;
  std::string formulation = "durham";  // "durham" | "angle" | "thrust"
  std::uint64_t event_seed = 1;
  std::string constituents_file;  // alternative to the generator
};

struct VertexTask {
  std::size_t events = 5;
  std::size_t n_vertices = 2;
  std::size_t tracks = 10;
  double separation_sigma = 5.0;
  double delta_z = 1.0;
  double m = 1.0;
  double lambda_pen = 0.0;  // <= 0: 1 + n_tracks
  std::uint64_t event_seed = 1;
};

struct BenchTask {
  std::vector<ProblemSource> problems;
  double budget_seconds = 5.0;
};

struct ExperimentConfig {
  int schema_version = 1;
  std::string task;  // solve | track | jets | vertex | bench
  std::vector<std::uint64_t> seeds;
  std::string output;
  unsigned jobs = 1;
  std::vector<SolverSpec> solvers;
  std::vector<std::string> solver_json;  // echo of each solver entry

  SolveTask solve;
  TrackTask track_task;
  JetsTask jets;
  VertexTask vertex;
  BenchTask bench_task;

  std::string config_json;  // canonical echo for reproduction

  void validate() const;
};

/// Strict parser: unknown keys, missing seeds, or an ambiguous problem
/// source are errors.
ExperimentConfig parse_config_json(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

struct RunRecord {
  std::string solver_id;
  std::uint64_t seed = 0;
  std::string problem;
  double energy = 0.0;
  double wall_time = 0.0;
  std::uint64_t evaluations = 0;
  std::map<std::string, double> metrics;
  std::optional<double> time_to_target;  // bench only; unset = never reached
  bool has_target = false;
  std::string status = "ok";  // or "error"
  std::string error;
};

struct Report {
  std::string library_version;
  int schema_version = 1;
  std::string config_echo;  // JSON text
  std::vector<RunRecord> records;

  bool all_ok() const;
};

/// JSON-lines serialization: one header line, then one record per line.
/// Writing is atomic (temp file + rename).
void write_report(const Report& report, const std::string& path);
Report read_report(const std::string& path);

/// Runs the configured task end to end and (when output is set) writes
/// the report. Per-run failures are recorded and do not abort the rest.
Report run_experiment(const ExperimentConfig& cfg);

/// Two-column text file "step best_energy"; the second column is
/// non-increasing.
void emit_trace(const SolveResult& result, const std::string& path);
std::vector<TracePoint> read_trace(const std::string& path);

/// Runs each solver on each problem under a wall-clock budget, recording
/// the best energy at budget and (when a brute-force target exists,
/// n <= 24) the elapsed time when the target energy was first matched.
Report bench_compare(const std::vector<ProblemSource>& problems,
                     const std::vector<SolverSpec>& solvers,
                     double budget_seconds,
                     const std::vector<std::uint64_t>& seeds,
                     unsigned jobs = 1);

}  // namespace qpr::bench
