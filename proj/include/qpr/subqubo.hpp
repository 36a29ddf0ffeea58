#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "qpr/problem.hpp"

namespace qpr {

using QuboSolverFn =
    std::function<SolveResult(const QuboProblem&, std::uint64_t seed)>;

struct SubQuboParams {
  std::size_t subset_size = 0;  // required, 1..n
  std::size_t rounds = 20;
  QuboSolverFn inner_solver;           // defaults to brute force
  std::string impact_rule = "flip_impact";  // largest |dE| under incumbent

  void validate(std::size_t n) const;
};

/// Builds the sub-problem induced by clamping every variable outside
/// `subset` to its incumbent value: couplings restricted to the subset,
/// clamped contributions folded into the diagonal and offset, so the
/// sub-problem energy of any subset assignment equals the full energy of
/// the combined configuration.
QuboProblem clamp_subproblem(const QuboProblem& p, const BinaryConfig& s,
                             const std::vector<std::size_t>& subset);

/// Iterative sub-QUBO driver: per round, selects the subset_size variables
/// with the largest flip impact under the incumbent, solves the clamped
/// sub-problem with the inner solver, and accepts the sub-solution only if
/// the total energy does not increase.
SolveResult subqubo_solve(const QuboProblem& p, const SubQuboParams& params,
                          std::uint64_t seed);

}  // namespace qpr
