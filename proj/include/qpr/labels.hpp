#pragma once

#include <cstddef>
#include <vector>

namespace qpr {

/// Fraction of positions where the two label sequences agree, maximized
/// over permutations of the k labels of `a`. Labels must lie in [0, k).
double best_label_match(const std::vector<int>& a, const std::vector<int>& b,
                        std::size_t k);

}  // namespace qpr
