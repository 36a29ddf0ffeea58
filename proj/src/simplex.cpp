#include "qpr/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qpr {

SimplexResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> start, const SimplexOptions& opts,
    const std::function<void(double)>& on_eval) {
  const std::size_t dim = start.size();
  SimplexResult res;
  res.evaluations = 0;

  auto eval = [&](const std::vector<double>& p) {
    ++res.evaluations;
    const double v = f(p);
    if (on_eval) on_eval(v);
    return v;
  };

  if (dim == 0) {
    res.x = start;
    res.value = eval(start);
    return res;
  }

  // reflection / expansion / contraction / shrink coefficients
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  std::vector<std::vector<double>> pts(dim + 1, start);
  std::vector<double> vals(dim + 1);
  for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += opts.initial_step;
  for (std::size_t i = 0; i <= dim; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> idx(dim + 1);
  std::vector<double> centroid(dim), candidate(dim);

  while (res.evaluations < opts.max_evaluations) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return vals[a] < vals[b];
    });
    const std::size_t best = idx[0], worst = idx[dim],
                      second_worst = idx[dim - 1];
    if (vals[worst] - vals[best] < opts.tolerance) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < dim; ++d) centroid[d] += pts[i][d];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    for (std::size_t d = 0; d < dim; ++d)
      candidate[d] = centroid[d] + alpha * (centroid[d] - pts[worst][d]);
    const double v_reflect = eval(candidate);

    if (v_reflect < vals[best]) {
      std::vector<double> expanded(dim);
      for (std::size_t d = 0; d < dim; ++d)
        expanded[d] = centroid[d] + gamma * (candidate[d] - centroid[d]);
      const double v_expand = eval(expanded);
      if (v_expand < v_reflect) {
        pts[worst] = std::move(expanded);
        vals[worst] = v_expand;
      } else {
        pts[worst] = candidate;
        vals[worst] = v_reflect;
      }
    } else if (v_reflect < vals[second_worst]) {
      pts[worst] = candidate;
      vals[worst] = v_reflect;
    } else {
      std::vector<double> contracted(dim);
      if (v_reflect < vals[worst]) {
        for (std::size_t d = 0; d < dim; ++d)
          contracted[d] = centroid[d] + rho * (candidate[d] - centroid[d]);
      } else {
        for (std::size_t d = 0; d < dim; ++d)
          contracted[d] = centroid[d] + rho * (pts[worst][d] - centroid[d]);
      }
      const double v_contract = eval(contracted);
      if (v_contract < std::min(v_reflect, vals[worst])) {
        pts[worst] = std::move(contracted);
        vals[worst] = v_contract;
      } else {
        for (std::size_t i = 0; i <= dim; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < dim; ++d)
            pts[i][d] = pts[best][d] + sigma * (pts[i][d] - pts[best][d]);
          vals[i] = eval(pts[i]);
          if (res.evaluations >= opts.max_evaluations) break;
        }
      }
    }
  }

  const std::size_t best =
      static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) -
                               vals.begin());
  res.x = pts[best];
  res.value = vals[best];
  return res;
}

}  // namespace qpr
