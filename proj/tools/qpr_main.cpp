// Command-line front end: solve / track / jets / vertex / bench tasks,
// all driven by a JSON config file (see docs/FORMATS.md).

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "qpr/experiment.hpp"
#include "qpr/kernels.hpp"
#include "qpr/version.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned jobs = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "experiment config file (JSON)")
      ->required();
  cmd->add_option("--out", args.out, "report output path (overrides config)");
  cmd->add_option("--seed", args.seed, "single seed (overrides config seeds)")
      ->each([&](const std::string&) { args.seed_set = true; });
  cmd->add_option("--jobs", args.jobs, "max concurrent runs");
}

int run_task(const std::string& task, const CommonArgs& args,
             const std::function<void(qpr::bench::ExperimentConfig&)>& tweak) {
  qpr::bench::ExperimentConfig cfg;
  try {
    cfg = qpr::bench::load_config(args.config);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  if (cfg.task != task) {
    std::fprintf(stderr, "error: config task is '%s' but subcommand is '%s'\n",
                 cfg.task.c_str(), task.c_str());
    return 2;
  }
  if (args.seed_set) cfg.seeds = {args.seed};
  if (!args.out.empty()) cfg.output = args.out;
  if (args.jobs > 0) cfg.jobs = args.jobs;
  if (tweak) tweak(cfg);

  try {
    const qpr::bench::Report report = qpr::bench::run_experiment(cfg);
    std::size_t failed = 0;
    for (const auto& rec : report.records) {
      if (rec.status != "ok") {
        ++failed;
        std::fprintf(stderr, "run failed: solver=%s seed=%llu: %s\n",
                     rec.solver_id.c_str(),
                     static_cast<unsigned long long>(rec.seed),
                     rec.error.c_str());
      }
    }
    if (!cfg.output.empty())
      std::printf("report: %s (%zu records, %zu failed)\n",
                  cfg.output.c_str(), report.records.size(), failed);
    else
      for (const auto& rec : report.records)
        std::printf("%s seed=%llu energy=%.10g\n", rec.solver_id.c_str(),
                    static_cast<unsigned long long>(rec.seed), rec.energy);
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ising/QUBO toolkit for collider pattern recognition"};
  app.require_subcommand(0, 1);

  bool show_version = false;
  app.add_flag("--version", show_version,
               "print library and schema versions");

  CommonArgs solve_args, track_args, jets_args, vertex_args, bench_args;
  std::size_t qaoa_depth = 0, qaoa_restarts = 0;
  std::uint64_t qaoa_shots = 0;

  CLI::App* solve = app.add_subcommand("solve", "solve an Ising/QUBO problem");
  add_common(solve, solve_args);
  solve->add_option("--depth", qaoa_depth, "qaoa: layer count override");
  solve->add_option("--restarts", qaoa_restarts, "qaoa: restart override");
  solve->add_option("--shots", qaoa_shots, "qaoa: sampling shots override");

  CLI::App* track = app.add_subcommand("track", "toy track-finding pipeline");
  add_common(track, track_args);
  CLI::App* jets = app.add_subcommand("jets", "toy jet-clustering pipeline");
  add_common(jets, jets_args);
  CLI::App* vertex = app.add_subcommand("vertex", "toy vertexing pipeline");
  add_common(vertex, vertex_args);
  CLI::App* bench = app.add_subcommand("bench", "solver comparison harness");
  add_common(bench, bench_args);

  CLI11_PARSE(app, argc, argv);

  if (show_version) {
    std::printf("qpr %s (report schema v%d, kernels: %s)\n", qpr::kVersion,
                qpr::kSchemaVersion,
                qpr::kernels::backend_name(qpr::kernels::active_backend())
                    .c_str());
    return 0;
  }

  if (solve->parsed()) {
    return run_task("solve", solve_args,
                    [&](qpr::bench::ExperimentConfig& cfg) {
                      for (auto& spec : cfg.solvers) {
                        if (spec.id != "qaoa") continue;
                        if (qaoa_depth > 0) spec.qaoa_depth = qaoa_depth;
                        if (qaoa_restarts > 0)
                          spec.qaoa_restarts = qaoa_restarts;
                        if (qaoa_shots > 0) spec.qaoa_shots = qaoa_shots;
                      }
                    });
  }
  if (track->parsed()) return run_task("track", track_args, {});
  if (jets->parsed()) return run_task("jets", jets_args, {});
  if (vertex->parsed()) return run_task("vertex", vertex_args, {});
  if (bench->parsed()) return run_task("bench", bench_args, {});

  std::fprintf(stderr, "%s\n", app.help().c_str());
  return 2;
}
