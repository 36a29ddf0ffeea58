#pragma once

#include <cstdint>
#include <vector>

#include "qpr/problem.hpp"
#include "qpr/sa.hpp"  // RunLimits

namespace qpr {

enum class SbVariant { Ballistic, Discrete };

/// Oscillator-network solver parameters. c0 <= 0 selects auto_c0.
/// The pump a(t) ramps linearly from 0 to a0 across `steps`.
struct SbParams {
  SbVariant variant = SbVariant::Discrete;
  double a0 = 1.0;
  double c0 = 0.0;  // <= 0: auto
  double dt = 0.5;
  std::size_t steps = 1000;
  std::size_t restarts = 8;
  std::size_t trace_interval = 25;  // best-energy checkpoint cadence

  void validate() const;
};

/// Positions and momenta of the oscillator network.
struct SbState {
  std::vector<double> x;
  std::vector<double> y;
  double t = 0.0;
};

/// Coupling normalization c0 = 0.5 * a0 / (sigma_J * sqrt(n)) with
/// sigma_J^2 = sum_{i!=j} J_ij^2 / (n (n-1)); falls back to a0 when the
/// couplings vanish (or n < 2).
double auto_c0(const IsingProblem& p, double a0);

/// One symplectic Euler step: momenta first from the position snapshot,
/// then positions, then the inelastic wall (|x|>1 -> x=sign(x), y=0).
///
/// The problem minimizes H = 1/2 sum J x x + sum h x, so the oscillator
/// force is the negative objective gradient: dy/dt picks up
/// c0 * (-h_i - sum_j J_ij x_j) (ballistic) or the same with sign(x_j)
/// inside the coupling sum (discrete; sign(0) = +1).
void sb_step(SbState& state, const IsingProblem& p, const SbParams& params,
             double pump);

/// Full solve: best sign(x) configuration over `restarts` restarts, each
/// integrating `steps` steps from x,y ~ U[-0.1, 0.1].
SolveResult sb_solve(const IsingProblem& p, const SbParams& params,
                     std::uint64_t seed, const RunLimits& limits = {});

/// Oscillator-network energy a0/2 sum y^2 + (a0-a)/2 sum x^2 + c0 * H(x),
/// the conserved quantity of the frozen-pump dynamics (diagnostics).
double sb_hamiltonian(const SbState& state, const IsingProblem& p,
                      double a0, double c0, double pump);

}  // namespace qpr
