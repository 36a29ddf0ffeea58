#pragma once

#include "qpr/problem.hpp"

namespace qpr {

struct BruteForceOptions {
  unsigned workers = 1;  // result is independent of the worker count
};

/// Exhaustive minimizer, n <= 24. Ties are broken toward the
/// lexicographically smallest configuration (element-wise, +1 before -1
/// for spins, 0 before 1 for binaries).
SolveResult brute_force_solve(const IsingProblem& p,
                              const BruteForceOptions& opts = {});
SolveResult brute_force_solve(const QuboProblem& p,
                              const BruteForceOptions& opts = {});

}  // namespace qpr
