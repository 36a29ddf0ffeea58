#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <thread>

#include "qpr/brute_force.hpp"
#include "qpr/experiment.hpp"
#include "qpr/problem_io.hpp"
#include "qpr/rng.hpp"
#include "qpr/version.hpp"

namespace qpr::bench {
namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  SplitMix64 sm(seed ^ (salt * 0x9e3779b97f4a7c15ULL));
  return sm.next();
}

struct BenchProblem {
  IsingProblem problem{1};
  std::string label;
  bool has_target = false;
  double target = 0.0;
};

}  // namespace

Report bench_compare(const std::vector<ProblemSource>& problems,
                     const std::vector<SolverSpec>& solvers,
                     double budget_seconds,
                     const std::vector<std::uint64_t>& seeds, unsigned jobs) {
  if (!(budget_seconds > 0.0))
    throw std::invalid_argument("bench_compare: budget must be > 0");

  Report report;
  report.library_version = qpr::kVersion;
  report.schema_version = qpr::kSchemaVersion;

  std::vector<BenchProblem> loaded;
  for (const auto& src : problems) {
    BenchProblem bp;
    bp.label = src.label();
    AnyProblem any = src.file.empty()
                         ? AnyProblem(random_problem(src.random_n,
                                                     src.random_density,
                                                     src.random_seed))
                         : load_problem(src.file);
    if (std::holds_alternative<IsingProblem>(any))
      bp.problem = std::get<IsingProblem>(std::move(any));
    else
      bp.problem = qubo_to_ising(std::get<QuboProblem>(any));
    if (bp.problem.n() <= 24) {
      bp.target = brute_force_solve(bp.problem).energy;
      bp.has_target = true;
    }
    loaded.push_back(std::move(bp));
  }

  std::vector<std::function<RunRecord()>> units;
  std::vector<RunRecord> records;
  for (const auto& bp : loaded) {
    for (const auto& spec : solvers) {
      for (const std::uint64_t seed : seeds) {
        units.push_back([&bp, spec, seed, budget_seconds]() {
          RunRecord rec;
          rec.solver_id = spec.id;
          rec.seed = seed;
          rec.problem = bp.label;
          rec.has_target = bp.has_target;
          try {
            const auto start = std::chrono::steady_clock::now();
            const auto deadline =
                start + std::chrono::duration_cast<
                            std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(budget_seconds));
            RunLimits limits;
            limits.deadline = deadline;

            double best = 0.0;
            bool have_best = false;
            std::uint64_t evals = 0;
            std::uint64_t chunk = 0;
            // repeated deterministic runs until the budget is spent; each
            // run also honors the deadline internally
            do {
              const SolveResult res =
                  solve_ising(bp.problem, spec, mix_seed(seed, chunk), limits);
              evals += res.evaluations;
              if (!have_best || res.energy < best) {
                best = res.energy;
                have_best = true;
              }
              if (bp.has_target && !rec.time_to_target &&
                  best <= bp.target + 1e-9) {
                rec.time_to_target =
                    std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
              }
              ++chunk;
            } while (std::chrono::steady_clock::now() < deadline);

            rec.energy = best;
            rec.evaluations = evals;
            rec.wall_time = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - start)
                                .count();
            rec.metrics["chunks"] = static_cast<double>(chunk);
          } catch (const std::exception& e) {
            rec.status = "error";
            rec.error = e.what();
          }
          return rec;
        });
      }
    }
  }

  records.resize(units.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, units.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < units.size(); ++i) records[i] = units[i]();
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
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
  report.records = std::move(records);
  return report;
}

}  // namespace qpr::bench
