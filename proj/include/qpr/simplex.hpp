#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace qpr {

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
};

struct SimplexOptions {
  double initial_step = 0.1;
  double tolerance = 1e-6;   // spread of simplex values at convergence
  std::size_t max_evaluations = 2000;
};

/// Nelder-Mead downhill simplex, deterministic for a given start point.
/// on_eval (optional) observes every objective evaluation.
SimplexResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> start, const SimplexOptions& opts = {},
    const std::function<void(double)>& on_eval = {});

}  // namespace qpr
