#include "qpr/qaoa.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "qpr/rng.hpp"
#include "qpr/simplex.hpp"

namespace qpr {

double StateVector::norm_sq() const {
  double acc = 0.0;
  for (const auto& a : amplitudes) acc += std::norm(a);
  return acc;
}

void QaoaParams::validate() const {
  if (betas.empty() || betas.size() != gammas.size())
    throw std::invalid_argument(
        "QaoaParams: need p >= 1 with matching beta/gamma lengths");
}

StateVector uniform_superposition(std::size_t n) {
  if (n < 1 || n > StateVector::kMaxQubits)
    throw std::invalid_argument("uniform_superposition: n must be in [1, 20]");
  StateVector sv;
  sv.n = n;
  const std::size_t dim = std::size_t{1} << n;
  const double amp = std::pow(2.0, -0.5 * static_cast<double>(n));
  sv.amplitudes.assign(dim, {amp, 0.0});
  return sv;
}

SpinConfig spins_from_basis_index(std::uint64_t z, std::size_t n) {
  SpinConfig cfg;
  cfg.values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    cfg.values[i] = (z >> i) & 1 ? -1 : 1;
  return cfg;
}

std::vector<double> diagonal_energies(const IsingProblem& p) {
  const std::size_t n = p.n();
  if (n > StateVector::kMaxQubits)
    throw std::invalid_argument("diagonal_energies: n must be <= 20");
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> energies(dim);

  // Gray-code walk with incremental single-flip updates
  std::vector<double> x(n, 1.0), f(n);
  p.local_fields(x.data(), f.data());
  double e = p.couplings().spin_energy(x.data(), p.fields().data());
  energies[0] = e;
  std::uint64_t g = 0;
  for (std::uint64_t t = 1; t < dim; ++t) {
    const std::size_t k = static_cast<std::size_t>(std::countr_zero(t));
    e += -2.0 * x[k] * f[k];
    x[k] = -x[k];
    const double scale = 2.0 * x[k];
    p.couplings().for_each_in_row(
        k, [&](std::size_t j, double v) { f[j] += scale * v; });
    g ^= std::uint64_t{1} << k;
    energies[g] = e;
  }
  return energies;
}

void apply_cost_layer(StateVector& sv, const std::vector<double>& energies,
                      double gamma) {
  if (energies.size() != sv.amplitudes.size())
    throw std::invalid_argument("apply_cost_layer: dimension mismatch");
  if (gamma == 0.0) return;
  for (std::size_t z = 0; z < energies.size(); ++z) {
    const double phase = -gamma * energies[z];
    sv.amplitudes[z] *= std::complex<double>(std::cos(phase), std::sin(phase));
  }
}

void apply_cost_layer(StateVector& sv, const IsingProblem& p, double gamma) {
  if (p.n() != sv.n)
    throw std::invalid_argument("apply_cost_layer: qubit count mismatch");
  apply_cost_layer(sv, diagonal_energies(p), gamma);
}

void apply_mixer_layer(StateVector& sv, double beta) {
  if (beta == 0.0) return;
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  const std::size_t dim = sv.amplitudes.size();
  auto* amp = sv.amplitudes.data();
  for (std::size_t q = 0; q < sv.n; ++q) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
      for (std::size_t k = base; k < base + stride; ++k) {
        const std::complex<double> a0 = amp[k];
        const std::complex<double> a1 = amp[k + stride];
        // [[cos b, -i sin b], [-i sin b, cos b]]
        amp[k] = {c * a0.real() + s * a1.imag(),
                  c * a0.imag() - s * a1.real()};
        amp[k + stride] = {c * a1.real() + s * a0.imag(),
                           c * a1.imag() - s * a0.real()};
      }
    }
  }
}

StateVector qaoa_state(const IsingProblem& p, const QaoaParams& params) {
  params.validate();
  StateVector sv = uniform_superposition(p.n());
  const auto energies = diagonal_energies(p);
  for (std::size_t layer = 0; layer < params.depth(); ++layer) {
    apply_cost_layer(sv, energies, params.gammas[layer]);
    apply_mixer_layer(sv, params.betas[layer]);
  }
  return sv;
}

namespace {

double expectation_of(const StateVector& sv,
                      const std::vector<double>& energies, double offset) {
  double acc = 0.0;
  for (std::size_t z = 0; z < energies.size(); ++z)
    acc += std::norm(sv.amplitudes[z]) * energies[z];
  return acc + offset;
}

}  // namespace

double qaoa_expectation(const IsingProblem& p, const QaoaParams& params) {
  params.validate();
  StateVector sv = uniform_superposition(p.n());
  const auto energies = diagonal_energies(p);
  for (std::size_t layer = 0; layer < params.depth(); ++layer) {
    apply_cost_layer(sv, energies, params.gammas[layer]);
    apply_mixer_layer(sv, params.betas[layer]);
  }
  return expectation_of(sv, energies, p.offset());
}

std::map<std::uint64_t, std::uint64_t> sample(const StateVector& sv,
                                              std::uint64_t shots,
                                              std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample: shots must be >= 1");
  const double norm = sv.norm_sq();
  if (std::fabs(norm - 1.0) > 1e-9)
    throw std::invalid_argument("sample: state is not normalized");

  // draw sorted uniforms, then sweep the cumulative distribution once
  Rng rng(seed);
  std::vector<double> u(shots);
  for (auto& v : u) v = rng.uniform();
  std::sort(u.begin(), u.end());

  std::map<std::uint64_t, std::uint64_t> counts;
  double cum = 0.0;
  std::size_t z = 0;
  const std::size_t dim = sv.amplitudes.size();
  cum = std::norm(sv.amplitudes[0]);
  for (double v : u) {
    v *= norm;  // guard against norm == 1 - eps
    while (v >= cum && z + 1 < dim) {
      ++z;
      cum += std::norm(sv.amplitudes[z]);
    }
    ++counts[z];
  }
  return counts;
}

QaoaParams schedule_seeded_params(std::size_t depth, double beta_max,
                                  double gamma_max) {
  QaoaParams params;
  params.betas.resize(depth);
  params.gammas.resize(depth);
  for (std::size_t k = 1; k <= depth; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(depth);
    params.gammas[k - 1] = gamma_max * s;
    params.betas[k - 1] = beta_max * (1.0 - s);
  }
  return params;
}

std::pair<QaoaParams, SolveResult> qaoa_optimize(const IsingProblem& p,
                                                 std::size_t depth,
                                                 std::size_t restarts,
                                                 std::uint64_t seed,
                                                 const QaoaOptions& opts) {
  if (depth < 1) throw std::invalid_argument("qaoa_optimize: depth must be >= 1");
  if (restarts < 1)
    throw std::invalid_argument("qaoa_optimize: restarts must be >= 1");
  if (p.n() > StateVector::kMaxQubits)
    throw std::invalid_argument("qaoa_optimize: n must be <= 20");

  const auto t0 = std::chrono::steady_clock::now();
  const auto energies = diagonal_energies(p);
  const std::size_t dim = energies.size();

  auto state_for = [&](const std::vector<double>& angles) {
    StateVector sv = uniform_superposition(p.n());
    for (std::size_t layer = 0; layer < depth; ++layer) {
      apply_cost_layer(sv, energies, angles[depth + layer]);
      apply_mixer_layer(sv, angles[layer]);
    }
    return sv;
  };
  auto objective = [&](const std::vector<double>& angles) {
    return expectation_of(state_for(angles), energies, p.offset());
  };

  SolveResult out;
  out.solver_id = "qaoa";
  out.seed = seed;
  std::uint64_t total_evals = 0;
  double best_value = 0.0;
  std::vector<double> best_angles;
  bool have_best = false;

  auto observe = [&](double v) {
    ++total_evals;
    trace_improvement(out.trace, static_cast<std::int64_t>(total_evals), v);
  };

  Rng rng(seed);
  SimplexOptions sopts;
  sopts.tolerance = opts.tolerance;
  sopts.max_evaluations = opts.max_evaluations_per_start;
  sopts.initial_step = 0.1;

  for (std::size_t r = 0; r < restarts; ++r) {
    std::vector<double> start(2 * depth);
    if (r == 0) {
      const QaoaParams seeded = schedule_seeded_params(depth);
      for (std::size_t k = 0; k < depth; ++k) {
        start[k] = seeded.betas[k];
        start[depth + k] = seeded.gammas[k];
      }
    } else {
      for (auto& v : start) v = rng.uniform(-0.5, 0.5);
    }
    const SimplexResult sr = nelder_mead(objective, start, sopts, observe);
    if (!have_best || sr.value < best_value) {
      best_value = sr.value;
      best_angles = sr.x;
      have_best = true;
    }
  }

  QaoaParams best_params;
  best_params.betas.assign(best_angles.begin(), best_angles.begin() + depth);
  best_params.gammas.assign(best_angles.begin() + depth, best_angles.end());

  const StateVector final_state = state_for(best_angles);
  std::size_t argmax = 0;
  double pmax = -1.0;
  for (std::size_t z = 0; z < dim; ++z) {
    const double pz = std::norm(final_state.amplitudes[z]);
    if (pz > pmax) {
      pmax = pz;
      argmax = z;
    }
  }
  const SpinConfig cfg = spins_from_basis_index(argmax, p.n());
  out.energy = p.energy(cfg);
  out.config = cfg;
  out.evaluations = total_evals;
  out.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return {best_params, out};
}

}  // namespace qpr
