#pragma once

#include <chrono>
#include <cstdint>
#include <optional>

#include "qpr/problem.hpp"

namespace qpr {

/// Optional wall-clock cutoff for long runs (benchmark mode). When the
/// deadline passes, solvers stop at the next work-quantum boundary and
/// return the best configuration seen so far.
struct RunLimits {
  std::optional<std::chrono::steady_clock::time_point> deadline;

  bool expired() const {
    return deadline && std::chrono::steady_clock::now() >= *deadline;
  }
};

/// Geometric cooling schedule. With auto_scale set, t_start is taken as
/// the largest single-flip |dE| at the initial random configuration and
/// t_end as 1e-3 * t_start; sweeps_per_stage defaults to n.
struct SaSchedule {
  double t_start = 0.0;
  double t_end = 0.0;
  double cooling_ratio = 0.97;
  std::size_t sweeps_per_stage = 0;  // 0 = n
  bool auto_scale = true;

  static SaSchedule defaults() { return SaSchedule{}; }
  static SaSchedule fixed(double t_start, double t_end, double ratio = 0.97,
                          std::size_t sweeps = 0) {
    return SaSchedule{t_start, t_end, ratio, sweeps, false};
  }
  void validate() const;
};

/// Boltzmann acceptance: downhill moves always, uphill with probability
/// exp(-delta_e / temperature) compared against u in [0,1).
bool metropolis_accept(double delta_e, double temperature, double u);

/// Single-flip Metropolis annealing with incremental energy updates.
/// One sweep proposes n random single-spin flips; the temperature is
/// multiplied by cooling_ratio after each stage until it reaches t_end.
SolveResult sa_solve(const IsingProblem& p, const SaSchedule& sched,
                     std::uint64_t seed, const RunLimits& limits = {});

}  // namespace qpr
