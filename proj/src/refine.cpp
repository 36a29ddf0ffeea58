#include "qpr/refine.hpp"

#include <stdexcept>
#include <vector>

namespace qpr {

SpinConfig local_refine(const IsingProblem& p, const SpinConfig& x) {
  const std::size_t n = p.n();
  if (x.size() != n)
    throw std::invalid_argument("local_refine: config size mismatch");
  std::vector<double> xd = x.as_doubles();
  std::vector<double> f(n);
  p.local_fields(xd.data(), f.data());

  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t k = 0; k < n; ++k) {
      const double de = -2.0 * xd[k] * f[k];
      if (de < 0.0) {
        xd[k] = -xd[k];
        const double scale = 2.0 * xd[k];
        p.couplings().for_each_in_row(
            k, [&](std::size_t j, double v) { f[j] += scale * v; });
        improved = true;
      }
    }
  }

  SpinConfig out;
  out.values.reserve(n);
  for (double v : xd)
    out.values.push_back(v > 0.0 ? std::int8_t{1} : std::int8_t{-1});
  return out;
}

}  // namespace qpr
