#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "qpr/problem.hpp"

namespace qpr {

/// Dense statevector over n <= 20 qubits. Basis index z has qubit i at
/// bit i (LSB first); bit 0 encodes spin +1, bit 1 encodes spin -1.
struct StateVector {
  std::size_t n = 0;
  std::vector<std::complex<double>> amplitudes;

  static constexpr std::size_t kMaxQubits = 20;

  double norm_sq() const;
};

/// Alternating-layer angles: gammas drive the diagonal cost phases,
/// betas the transverse mixer.
struct QaoaParams {
  std::vector<double> betas;
  std::vector<double> gammas;

  std::size_t depth() const { return betas.size(); }
  void validate() const;
};

StateVector uniform_superposition(std::size_t n);

/// Diagonal cost energies of every basis state: the spin objective
/// (1/2 sum J x x + sum h x) WITHOUT the constant offset.
std::vector<double> diagonal_energies(const IsingProblem& p);

/// amp[z] *= exp(-i gamma E(z)); norm preserved.
void apply_cost_layer(StateVector& sv, const IsingProblem& p, double gamma);
void apply_cost_layer(StateVector& sv, const std::vector<double>& energies,
                      double gamma);
/// exp(-i beta sigma^x) on every qubit; norm preserved.
void apply_mixer_layer(StateVector& sv, double beta);

/// State after all layers (cost then mixer per layer) applied to the
/// uniform superposition.
StateVector qaoa_state(const IsingProblem& p, const QaoaParams& params);

/// sum_z |amp_z|^2 E(z) + offset; bounded below by the exact minimum.
double qaoa_expectation(const IsingProblem& p, const QaoaParams& params);

/// Multinomial sampling from |amp|^2; counts keyed by basis index.
std::map<std::uint64_t, std::uint64_t> sample(const StateVector& sv,
                                              std::uint64_t shots,
                                              std::uint64_t seed);

/// Angles gamma_k = gamma_max * k/p, beta_k = beta_max * (1 - k/p)
/// (k = 1..p), the discretized linear annealing path used to seed the
/// optimizer. The default beta_max is negative: the uniform superposition
/// is the ground state of the NEGATED transverse-field sum, so the
/// annealing-like path toward the energy minimum uses mixer angles of the
/// opposite sign to the cost angles.
QaoaParams schedule_seeded_params(std::size_t depth, double beta_max = -0.5,
                                  double gamma_max = 0.5);

struct QaoaOptions {
  std::size_t max_evaluations_per_start = 2000;
  double tolerance = 1e-6;
};

/// Multistart Nelder-Mead over the 2p angles: one schedule-seeded start
/// plus restarts-1 random starts. The SolveResult carries the most
/// probable basis state of the best final statevector.
std::pair<QaoaParams, SolveResult> qaoa_optimize(const IsingProblem& p,
                                                 std::size_t depth,
                                                 std::size_t restarts,
                                                 std::uint64_t seed,
                                                 const QaoaOptions& opts = {});

SpinConfig spins_from_basis_index(std::uint64_t z, std::size_t n);

}  // namespace qpr
