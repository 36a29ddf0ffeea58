#pragma once

#include <cstdint>
#include <string>

#include "qpr/brute_force.hpp"
#include "qpr/problem.hpp"
#include "qpr/sa.hpp"
#include "qpr/sb.hpp"
#include "qpr/subqubo.hpp"

namespace qpr {

/// Parsed solver selection: one of "sa", "bsb", "dsb", "subqubo",
/// "brute", "qaoa" plus its parameters.
struct SolverSpec {
  std::string id = "sa";

  SaSchedule sa;
  SbParams sb;

  std::size_t subqubo_subset = 8;
  std::size_t subqubo_rounds = 20;
  std::string subqubo_inner = "brute";

  std::size_t qaoa_depth = 3;
  std::size_t qaoa_restarts = 10;
  std::uint64_t qaoa_shots = 1024;

  unsigned brute_workers = 1;

  void validate() const;
};

bool known_solver_id(const std::string& id);

/// Runs the selected solver on an Ising problem. QUBO-native solvers
/// (subqubo) see the converted problem; results are mapped back and the
/// energy is re-evaluated on the input problem.
SolveResult solve_ising(const IsingProblem& p, const SolverSpec& spec,
                        std::uint64_t seed, const RunLimits& limits = {});

/// Same for QUBO problems; spin-native solvers run on the converted
/// problem.
SolveResult solve_qubo(const QuboProblem& p, const SolverSpec& spec,
                       std::uint64_t seed, const RunLimits& limits = {});

}  // namespace qpr
