#pragma once

#include "qpr/problem.hpp"

namespace qpr {

/// First-improvement single-flip descent in fixed index order; repeats
/// full scans until no flip lowers the energy. Never increases energy.
SpinConfig local_refine(const IsingProblem& p, const SpinConfig& x);

}  // namespace qpr
