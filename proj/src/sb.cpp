#include "qpr/sb.hpp"

#include <cmath>
#include <stdexcept>

#include "qpr/kernels.hpp"
#include "qpr/rng.hpp"

namespace qpr {

void SbParams::validate() const {
  if (!(a0 > 0.0)) throw std::invalid_argument("SbParams: a0 must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("SbParams: dt must be > 0");
  if (steps < 1) throw std::invalid_argument("SbParams: steps must be >= 1");
  if (restarts < 1)
    throw std::invalid_argument("SbParams: restarts must be >= 1");
}

double auto_c0(const IsingProblem& p, double a0) {
  const std::size_t n = p.n();
  if (n < 2) return a0;
  const double sum_sq = p.couplings().offdiag_sum_sq();
  if (sum_sq == 0.0) return a0;
  const double sigma =
      std::sqrt(sum_sq / (static_cast<double>(n) * static_cast<double>(n - 1)));
  return 0.5 * a0 / (sigma * std::sqrt(static_cast<double>(n)));
}

namespace {

void check_finite(const SbState& state) {
  for (double v : state.x)
    if (!std::isfinite(v))
      throw std::invalid_argument("sb_step: non-finite position");
  for (double v : state.y)
    if (!std::isfinite(v))
      throw std::invalid_argument("sb_step: non-finite momentum");
}

// f_i = h_i + sum_j J_ij x_j (ballistic) or with sign-quantized x
// (discrete); the update then applies the -c0 * f force.
void compute_force_fields(const IsingProblem& p, SbVariant variant,
                          const std::vector<double>& x,
                          std::vector<double>& sgn_buf,
                          std::vector<double>& f) {
  if (variant == SbVariant::Discrete) {
    kernels::sign_pm1(x.data(), sgn_buf.data(), x.size());
    p.local_fields(sgn_buf.data(), f.data());
    // h enters with the continuous couplings in both variants; local_fields
    // already adds h once, nothing further to adjust
  } else {
    p.local_fields(x.data(), f.data());
  }
}

}  // namespace

void sb_step(SbState& state, const IsingProblem& p, const SbParams& params,
             double pump) {
  const std::size_t n = p.n();
  if (state.x.size() != n || state.y.size() != n)
    throw std::invalid_argument("sb_step: state size mismatch");
  if (!(pump >= 0.0 && pump <= params.a0))
    throw std::invalid_argument("sb_step: pump must be in [0, a0]");
  check_finite(state);
  const double c0 = params.c0 > 0.0 ? params.c0 : auto_c0(p, params.a0);

  static thread_local std::vector<double> sgn_buf, f;
  sgn_buf.resize(n);
  f.resize(n);
  compute_force_fields(p, params.variant, state.x, sgn_buf, f);
  kernels::sb_update(state.x.data(), state.y.data(), f.data(), params.dt,
                     params.a0, params.a0 - pump, c0, n);
  state.t += params.dt;
}

double sb_hamiltonian(const SbState& state, const IsingProblem& p, double a0,
                      double c0, double pump) {
  double kin = 0.0;
  for (double yi : state.y) kin += yi * yi;
  double conf = 0.0;
  for (double xi : state.x) conf += xi * xi;
  const double obj =
      p.couplings().spin_energy(state.x.data(), p.fields().data());
  return 0.5 * a0 * kin + 0.5 * (a0 - pump) * conf + c0 * obj;
}

SolveResult sb_solve(const IsingProblem& p, const SbParams& params,
                     std::uint64_t seed, const RunLimits& limits) {
  params.validate();
  const std::size_t n = p.n();
  const double c0 = params.c0 > 0.0 ? params.c0 : auto_c0(p, params.a0);

  const auto t0 = std::chrono::steady_clock::now();
  SolveResult out;
  out.solver_id = params.variant == SbVariant::Discrete ? "dsb" : "bsb";
  out.seed = seed;

  std::vector<double> x(n), y(n), sgn_buf(n), f(n);
  std::vector<double> best_x;
  double best_e = 0.0;
  bool have_best = false;
  std::uint64_t evaluations = 0;
  std::int64_t global_step = 0;

  SplitMix64 seeder(seed);
  for (std::size_t r = 0; r < params.restarts; ++r) {
    Rng rng(seeder.next());
    for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(-0.1, 0.1);
    for (std::size_t i = 0; i < n; ++i) y[i] = rng.uniform(-0.1, 0.1);

    auto consider = [&]() {
      kernels::sign_pm1(x.data(), sgn_buf.data(), n);
      const double e = p.energy(sgn_buf.data());
      ++evaluations;
      if (!have_best || e < best_e) {
        best_e = e;
        best_x = sgn_buf;
        have_best = true;
        trace_improvement(out.trace, global_step, best_e);
      }
    };

    bool stop = false;
    for (std::size_t k = 0; k < params.steps; ++k) {
      const double pump =
          params.steps == 1
              ? params.a0
              : params.a0 * static_cast<double>(k) /
                    static_cast<double>(params.steps - 1);
      compute_force_fields(p, params.variant, x, sgn_buf, f);
      kernels::sb_update(x.data(), y.data(), f.data(), params.dt, params.a0,
                         params.a0 - pump, c0, n);
      ++global_step;
      if (params.trace_interval > 0 &&
          (k + 1) % params.trace_interval == 0 && k + 1 != params.steps)
        consider();
      if (limits.expired()) {
        stop = true;
        break;
      }
    }
    consider();
    if (stop) break;
  }

  SpinConfig cfg;
  cfg.values.reserve(n);
  for (double v : best_x)
    cfg.values.push_back(v > 0.0 ? std::int8_t{1} : std::int8_t{-1});
  out.energy = p.energy(cfg);
  out.config = std::move(cfg);
  out.evaluations = evaluations;
  out.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

}  // namespace qpr
