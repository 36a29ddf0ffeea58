#include "qpr/subqubo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qpr/brute_force.hpp"
#include "qpr/rng.hpp"

namespace qpr {

void SubQuboParams::validate(std::size_t n) const {
  if (subset_size < 1 || subset_size > n)
    throw std::invalid_argument("SubQuboParams: subset_size must be in [1, n]");
  if (rounds < 1)
    throw std::invalid_argument("SubQuboParams: rounds must be >= 1");
  if (impact_rule != "flip_impact")
    throw std::invalid_argument("SubQuboParams: unknown impact rule '" +
                                impact_rule + "'");
}

QuboProblem clamp_subproblem(const QuboProblem& p, const BinaryConfig& s,
                             const std::vector<std::size_t>& subset) {
  const std::size_t n = p.n();
  std::vector<std::size_t> pos(n, n);  // n = clamped
  for (std::size_t a = 0; a < subset.size(); ++a) pos[subset[a]] = a;

  QuboProblem sub(subset.size());

  // restricted couplings + linear fold of the clamped neighbourhood
  for (std::size_t a = 0; a < subset.size(); ++a) {
    const std::size_t i = subset[a];
    double lin = p.matrix().at(i, i);
    double fold = 0.0;
    p.matrix().for_each_in_row(i, [&](std::size_t j, double v) {
      if (j == i) return;
      if (pos[j] != n) {
        if (i < j) sub.add_entry(a, pos[j], v);
      } else {
        fold += v * (s.values[j] ? 1.0 : 0.0);
      }
    });
    lin += 2.0 * fold;  // row and column contributions of the clamped vars
    if (lin != 0.0) sub.add_entry(a, a, lin);
  }

  // clamped-clamped block goes to the offset
  double clamped_e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (pos[i] != n || !s.values[i]) continue;
    double acc = 0.0;
    p.matrix().for_each_in_row(i, [&](std::size_t j, double v) {
      if (pos[j] == n && s.values[j]) acc += v;
    });
    clamped_e += acc;
  }
  sub.set_offset(p.offset() + clamped_e);
  return sub;
}

SolveResult subqubo_solve(const QuboProblem& p, const SubQuboParams& params,
                          std::uint64_t seed) {
  const std::size_t n = p.n();
  params.validate(n);
  QuboSolverFn inner = params.inner_solver;
  if (!inner) {
    inner = [](const QuboProblem& q, std::uint64_t) {
      return brute_force_solve(q);
    };
  }

  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(seed);
  SplitMix64 seeder(seed ^ 0x5b5e5ca5u);

  BinaryConfig s;
  s.values.resize(n);
  for (auto& b : s.values) b = rng.coin() ? 1 : 0;
  double e = p.energy(s);

  SolveResult out;
  out.solver_id = "subqubo";
  out.seed = seed;
  std::uint64_t evaluations = 1;
  trace_improvement(out.trace, 0, e);

  std::vector<double> sd(n), qf(n);
  std::vector<std::size_t> order(n);
  std::size_t stall = 0;  // rounds since the incumbent last changed
  for (std::size_t round = 0; round < params.rounds; ++round) {
    // flip impact of each variable under the incumbent
    for (std::size_t i = 0; i < n; ++i) sd[i] = s.values[i] ? 1.0 : 0.0;
    p.row_fields(sd.data(), qf.data());
    std::vector<double> impact(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double qii = p.matrix().at(i, i);
      const double de =
          (1.0 - 2.0 * sd[i]) * (qii + 2.0 * (qf[i] - qii * sd[i]));
      impact[i] = std::fabs(de);
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return impact[a] > impact[b];
                     });
    // largest-impact window; a stalled incumbent slides the window down
    // the ranking (half-subset stride) so later rounds re-optimize the
    // ambiguous variables instead of re-solving the same block
    const std::size_t stride = std::max<std::size_t>(1, params.subset_size / 2);
    const std::size_t start = (stall * stride) % n;
    std::vector<std::size_t> subset;
    subset.reserve(params.subset_size);
    for (std::size_t k = 0; k < params.subset_size; ++k)
      subset.push_back(order[(start + k) % n]);
    std::sort(subset.begin(), subset.end());

    const QuboProblem sub = clamp_subproblem(p, s, subset);
    const SolveResult inner_res = inner(sub, seeder.next());
    evaluations += std::max<std::uint64_t>(inner_res.evaluations, 1);

    BinaryConfig candidate = s;
    const BinaryConfig& sub_bits = inner_res.bits();
    for (std::size_t a = 0; a < subset.size(); ++a)
      candidate.values[subset[a]] = sub_bits.values[a];
    const double e_cand = p.energy(candidate);
    ++evaluations;
    if (e_cand <= e && candidate.values != s.values) {
      s = std::move(candidate);
      e = e_cand;
      stall = 0;
    } else {
      ++stall;
    }
    trace_improvement(out.trace, static_cast<std::int64_t>(round + 1), e);
  }

  out.energy = p.energy(s);
  out.config = std::move(s);
  out.evaluations = evaluations;
  out.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

}  // namespace qpr
