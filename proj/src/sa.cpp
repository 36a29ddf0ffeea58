#include "qpr/sa.hpp"

#include <cmath>
#include <stdexcept>

#include "qpr/rng.hpp"

namespace qpr {

void SaSchedule::validate() const {
  if (auto_scale) {
    if (!(cooling_ratio > 0.0 && cooling_ratio < 1.0))
      throw std::invalid_argument("SaSchedule: cooling_ratio must be in (0,1)");
    return;
  }
  if (!(t_start > 0.0) || !(t_end > 0.0) || t_start < t_end)
    throw std::invalid_argument("SaSchedule: need t_start >= t_end > 0");
  if (!(cooling_ratio > 0.0 && cooling_ratio < 1.0))
    throw std::invalid_argument("SaSchedule: cooling_ratio must be in (0,1)");
}

bool metropolis_accept(double delta_e, double temperature, double u) {
  if (!(temperature > 0.0))
    throw std::invalid_argument("metropolis_accept: temperature must be > 0");
  if (delta_e <= 0.0) return true;
  return u < std::exp(-delta_e / temperature);
}

SolveResult sa_solve(const IsingProblem& p, const SaSchedule& sched,
                     std::uint64_t seed, const RunLimits& limits) {
  sched.validate();
  const std::size_t n = p.n();
  Rng rng(seed);

  const auto t0 = std::chrono::steady_clock::now();

  std::vector<double> x(n);
  for (auto& xi : x) xi = rng.spin();
  std::vector<double> f(n);
  p.local_fields(x.data(), f.data());
  double e = p.energy(x.data());

  double t_start = sched.t_start;
  double t_end = sched.t_end;
  if (sched.auto_scale) {
    double max_de = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      max_de = std::max(max_de, std::fabs(-2.0 * x[i] * f[i]));
    t_start = max_de > 0.0 ? max_de : 1.0;
    t_end = 1e-3 * t_start;
  }
  const std::size_t sweeps =
      sched.sweeps_per_stage > 0 ? sched.sweeps_per_stage : n;

  SolveResult out;
  out.solver_id = "sa";
  out.seed = seed;
  std::vector<double> best_x = x;
  double best_e = e;
  std::uint64_t proposals = 0;
  trace_improvement(out.trace, 0, best_e);

  double temperature = t_start;
  bool stop = false;
  do {
    for (std::size_t sweep = 0; sweep < sweeps && !stop; ++sweep) {
      for (std::size_t step = 0; step < n; ++step) {
        const std::size_t k = static_cast<std::size_t>(rng.below(n));
        const double de = -2.0 * x[k] * f[k];
        const double u = rng.uniform();
        ++proposals;
        if (metropolis_accept(de, temperature, u)) {
          x[k] = -x[k];
          e += de;
          const double scale = 2.0 * x[k];
          p.couplings().for_each_in_row(
              k, [&](std::size_t j, double v) { f[j] += scale * v; });
          if (e < best_e) {
            best_e = e;
            best_x = x;
            trace_improvement(
                out.trace, static_cast<std::int64_t>(proposals), best_e);
          }
        }
      }
      if (limits.expired()) stop = true;
    }
    temperature *= sched.cooling_ratio;
  } while (temperature > t_end && !stop);

  SpinConfig cfg;
  cfg.values.reserve(n);
  for (double xi : best_x)
    cfg.values.push_back(xi > 0.0 ? std::int8_t{1} : std::int8_t{-1});
  out.energy = p.energy(cfg);  // canonical re-evaluation
  // keep the trace consistent with the canonical value
  if (!out.trace.empty() && out.energy < out.trace.back().energy)
    out.trace.push_back({static_cast<std::int64_t>(proposals), out.energy});
  out.config = std::move(cfg);
  out.evaluations = proposals;
  out.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

}  // namespace qpr
