#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qpr/experiment.hpp"
#include "qpr/labels.hpp"
#include "qpr/problem_io.hpp"
#include "qpr/rng.hpp"
#include "qpr/version.hpp"

namespace qpr::bench {
namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  SplitMix64 sm(seed ^ (salt * 0x9e3779b97f4a7c15ULL));
  return sm.next();
}

AnyProblem load_source(const ProblemSource& src) {
  if (!src.file.empty()) return load_problem(src.file);
  return random_problem(src.random_n, src.random_density, src.random_seed);
}

/// Runs the units on up to `jobs` threads; each unit fills records[i].
void run_units(std::vector<std::function<RunRecord()>>& units,
               std::vector<RunRecord>& records, unsigned jobs) {
  records.resize(units.size());
  const unsigned workers =
      std::max(1u, std::min<unsigned>(jobs, units.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < units.size(); ++i) records[i] = units[i]();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= units.size()) return;
        records[i] = units[i]();
      }
    });
  }
  for (auto& th : pool) th.join();
}

RunRecord guarded(const std::string& solver_id, std::uint64_t seed,
                  const std::string& problem,
                  const std::function<void(RunRecord&)>& body) {
  RunRecord rec;
  rec.solver_id = solver_id;
  rec.seed = seed;
  rec.problem = problem;
  try {
    body(rec);
  } catch (const std::exception& e) {
    rec.status = "error";
    rec.error = e.what();
  }
  return rec;
}

Report make_report(const ExperimentConfig& cfg) {
  Report report;
  report.library_version = qpr::kVersion;
  report.schema_version = qpr::kSchemaVersion;
  report.config_echo = cfg.config_json;
  return report;
}

SolveResult solve_with(const IsingProblem& p, const SolverSpec& spec,
                       std::uint64_t seed) {
  return solve_ising(p, spec, seed);
}
SolveResult solve_with(const QuboProblem& p, const SolverSpec& spec,
                       std::uint64_t seed) {
  return solve_qubo(p, spec, seed);
}

Report run_solve_task(const ExperimentConfig& cfg) {
  Report report = make_report(cfg);
  const AnyProblem problem = load_source(cfg.solve.problem);
  const std::string label = cfg.solve.problem.label();

  std::vector<std::function<RunRecord()>> units;
  for (const auto& spec : cfg.solvers) {
    for (const std::uint64_t seed : cfg.seeds) {
      units.push_back([&, spec, seed] {
        return guarded(spec.id, seed, label, [&](RunRecord& rec) {
          const SolveResult res = std::visit(
              [&](const auto& p) { return solve_with(p, spec, seed); },
              problem);
          rec.energy = res.energy;
          rec.evaluations = res.evaluations;
          rec.wall_time = res.wall_time;
          if (!cfg.solve.trace_output.empty()) {
            std::ostringstream path;
            path << cfg.solve.trace_output << "-" << spec.id << "-" << seed
                 << ".txt";
            emit_trace(res, path.str());
          }
        });
      });
    }
  }
  run_units(units, report.records, cfg.jobs);
  return report;
}

struct TrackEventData {
  std::vector<track::Hit> hits;
  std::vector<track::Doublet> doublets;
  std::vector<track::Triplet> triplets;
  QuboProblem problem{1};
  track::DoubletSet truth;
  bool empty = false;  // no segments survived the cuts
};

Report run_track_task(const ExperimentConfig& cfg) {
  Report report = make_report(cfg);
  const TrackTask& task = cfg.track_task;

  std::vector<TrackEventData> events;
  const std::size_t n_events =
      task.hits_file.empty() ? task.events : std::size_t{1};
  SplitMix64 event_seeds(task.event_seed);
  for (std::size_t e = 0; e < n_events; ++e) {
    TrackEventData data;
    if (!task.hits_file.empty()) {
      data.hits = track::load_hits_csv(task.hits_file);
    } else {
      data.hits =
          track::generate_toy_event(task.particles, task.detector,
                                    event_seeds.next())
              .hits;
    }
    data.truth = track::truth_doublets(data.hits);
    data.doublets = track::build_doublets(data.hits, task.cuts);
    if (task.segment == "triplet") {
      data.triplets =
          track::build_triplets(data.doublets, data.hits, task.triplet_cuts);
      data.empty = data.triplets.empty();
      data.problem = track::triplet_qubo(data.triplets, task.triplet_qubo);
    } else {
      data.empty = data.doublets.empty();
      data.problem =
          track::dp_qubo(data.doublets, data.hits, task.dp).problem;
    }
    events.push_back(std::move(data));
  }

  std::vector<std::function<RunRecord()>> units;
  for (const auto& spec : cfg.solvers) {
    for (const std::uint64_t seed : cfg.seeds) {
      units.push_back([&, spec, seed] {
        return guarded(spec.id, seed, "track_toy", [&](RunRecord& rec) {
          double sum_e = 0.0, sum_eff = 0.0, sum_pur = 0.0, wall = 0.0;
          std::uint64_t evals = 0;
          for (std::size_t e = 0; e < events.size(); ++e) {
            const auto& data = events[e];
            track::DoubletSet kept;
            SolveResult res;
            if (!data.empty) {
              res = solve_qubo(data.problem, spec, mix_seed(seed, e));
              kept = task.segment == "triplet"
                         ? track::kept_doublets(res.bits(), data.triplets)
                         : track::kept_doublets(res.bits(), data.doublets);
            }
            const auto metrics = track::doublet_metrics(kept, data.truth);
            sum_e += res.energy;
            sum_eff += metrics.efficiency;
            sum_pur += metrics.purity;
            wall += res.wall_time;
            evals += res.evaluations;
          }
          const double n = static_cast<double>(events.size());
          rec.energy = sum_e / n;
          rec.wall_time = wall;
          rec.evaluations = evals;
          rec.metrics["efficiency"] = sum_eff / n;
          rec.metrics["purity"] = sum_pur / n;
          rec.metrics["events"] = n;
        });
      });
    }
  }
  run_units(units, report.records, cfg.jobs);
  return report;
}

struct JetEventData {
  jet::JetEvent event;
  QuboProblem problem{1};
  jet::JetAssignment reference;
};

Report run_jets_task(const ExperimentConfig& cfg) {
  Report report = make_report(cfg);
  const JetsTask& task = cfg.jets;
  if ((task.formulation == "angle" || task.formulation == "thrust") &&
      task.n_jet != 2)
    throw std::runtime_error("config: " + task.formulation +
                             " formulation is dijet-only (n_jet = 2)");

  std::vector<JetEventData> events;
  const std::size_t n_events =
      task.constituents_file.empty() ? task.events : std::size_t{1};
  SplitMix64 event_seeds(task.event_seed);
  for (std::size_t e = 0; e < n_events; ++e) {
    JetEventData data;
    if (!task.constituents_file.empty()) {
      data.event = jet::load_constituents_csv(task.constituents_file);
      data.event.n_jet = task.n_jet;
    } else {
      data.event = jet::generate_jet_event(task.n_jet, task.sqrt_s,
                                           task.spread,
                                           task.constituents_per_jet,
                                           event_seeds.next());
    }
    if (task.formulation == "durham") {
      data.problem =
          jet::multijet_qubo(jet::durham_matrix(data.event), task.n_jet);
    } else if (task.formulation == "angle") {
      data.problem = jet::angle_qubo(data.event);
    } else {
      data.problem = jet::thrust_qubo(data.event);
    }
    data.reference = jet::eekt_cluster(data.event, task.n_jet);
    events.push_back(std::move(data));
  }

  std::vector<std::function<RunRecord()>> units;
  for (const auto& spec : cfg.solvers) {
    for (const std::uint64_t seed : cfg.seeds) {
      units.push_back([&, spec, seed] {
        return guarded(spec.id, seed, "jets_toy", [&](RunRecord& rec) {
          double sum_e = 0.0, sum_eff = 0.0, sum_mass = 0.0, wall = 0.0;
          double bad_bits = 0.0, total_constituents = 0.0;
          std::uint64_t evals = 0;
          for (std::size_t e = 0; e < events.size(); ++e) {
            const auto& data = events[e];
            const SolveResult res =
                solve_qubo(data.problem, spec, mix_seed(seed, e));
            jet::JetAssignment assignment;
            if (task.formulation == "durham") {
              assignment = jet::decode_jets(res.bits(), data.event,
                                            task.n_jet);
            } else {
              // dijet selection: kept -> jet 0, complement -> jet 1
              assignment.n_jet = 2;
              for (auto bit : res.bits().values)
                assignment.jet_of.push_back(bit ? 0 : 1);
            }
            sum_e += res.energy;
            sum_eff += jet::jet_efficiency(assignment, data.reference);
            sum_mass += jet::invariant_mass(
                jet::jets_from_assignment(data.event, assignment));
            bad_bits += static_cast<double>(assignment.violations +
                                            assignment.repairs);
            total_constituents +=
                static_cast<double>(data.event.constituents.size());
            wall += res.wall_time;
            evals += res.evaluations;
          }
          const double n = static_cast<double>(events.size());
          rec.energy = sum_e / n;
          rec.wall_time = wall;
          rec.evaluations = evals;
          rec.metrics["jet_efficiency"] = sum_eff / n;
          rec.metrics["mean_mass"] = sum_mass / n;
          rec.metrics["onehot_bad_fraction"] =
              total_constituents > 0.0 ? bad_bits / total_constituents : 0.0;
          rec.metrics["events"] = n;
        });
      });
    }
  }
  run_units(units, report.records, cfg.jobs);
  return report;
}

Report run_vertex_task(const ExperimentConfig& cfg) {
  Report report = make_report(cfg);
  const VertexTask& task = cfg.vertex;

  struct VertexEventData {
    track::VertexToy toy;
    QuboProblem problem{1};
  };
  std::vector<VertexEventData> events;
  SplitMix64 event_seeds(task.event_seed);
  for (std::size_t e = 0; e < task.events; ++e) {
    VertexEventData data;
    data.toy = track::generate_vertex_toy(task.n_vertices, task.tracks,
                                          task.separation_sigma, task.delta_z,
                                          event_seeds.next());
    track::VertexProblemParams params;
    params.n_vertices = task.n_vertices;
    params.m = task.m;
    params.lambda_pen = task.lambda_pen > 0.0
                            ? task.lambda_pen
                            : 1.0 + static_cast<double>(task.tracks);
    data.problem = track::vertex_qubo(data.toy.tracks, params);
    events.push_back(std::move(data));
  }

  std::vector<std::function<RunRecord()>> units;
  for (const auto& spec : cfg.solvers) {
    for (const std::uint64_t seed : cfg.seeds) {
      units.push_back([&, spec, seed] {
        return guarded(spec.id, seed, "vertex_toy", [&](RunRecord& rec) {
          double sum_e = 0.0, sum_acc = 0.0, wall = 0.0;
          std::uint64_t evals = 0;
          for (std::size_t e = 0; e < events.size(); ++e) {
            const auto& data = events[e];
            const SolveResult res =
                solve_qubo(data.problem, spec, mix_seed(seed, e));
            const auto assignment = track::decode_vertices(
                res.bits(), data.toy.tracks, task.n_vertices);
            sum_acc += best_label_match(assignment.vertex_of,
                                        data.toy.truth_vertex,
                                        task.n_vertices);
            sum_e += res.energy;
            wall += res.wall_time;
            evals += res.evaluations;
          }
          const double n = static_cast<double>(events.size());
          rec.energy = sum_e / n;
          rec.wall_time = wall;
          rec.evaluations = evals;
          rec.metrics["accuracy"] = sum_acc / n;
          rec.metrics["events"] = n;
        });
      });
    }
  }
  run_units(units, report.records, cfg.jobs);
  return report;
}

}  // namespace

Report run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Report report;
  if (cfg.task == "solve") {
    report = run_solve_task(cfg);
  } else if (cfg.task == "track") {
    report = run_track_task(cfg);
  } else if (cfg.task == "jets") {
    report = run_jets_task(cfg);
  } else if (cfg.task == "vertex") {
    report = run_vertex_task(cfg);
  } else if (cfg.task == "bench") {
    report = bench_compare(cfg.bench_task.problems, cfg.solvers,
                           cfg.bench_task.budget_seconds, cfg.seeds,
                           cfg.jobs);
    report.config_echo = cfg.config_json;
  } else {
    throw std::runtime_error("config: unknown task " + cfg.task);
  }
  if (!cfg.output.empty()) write_report(report, cfg.output);
  return report;
}

}  // namespace qpr::bench
