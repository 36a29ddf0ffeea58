#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qpr/brute_force.hpp"
#include "qpr/refine.hpp"
#include "qpr/rng.hpp"
#include "qpr/sa.hpp"

using namespace qpr;

TEST_CASE("metropolis: downhill always accepted") {
  CHECK(metropolis_accept(-0.5, 0.001, 0.999999));
  CHECK(metropolis_accept(-100.0, 5.0, 0.0));
}

TEST_CASE("metropolis: zero delta accepted (exp(0) = 1 > u)") {
  CHECK(metropolis_accept(0.0, 1.0, 0.999999));
}

TEST_CASE("metropolis: hand-evaluated Boltzmann factor") {
  // exp(-1) ~ 0.3679: u = 0.5 rejects, u = 0.3 accepts
  CHECK_FALSE(metropolis_accept(1.0, 1.0, 0.5));
  CHECK(metropolis_accept(1.0, 1.0, 0.3));
}

TEST_CASE("metropolis: non-positive temperature is an error") {
  CHECK_THROWS_AS(metropolis_accept(1.0, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(metropolis_accept(1.0, -1.0, 0.5), std::invalid_argument);
}

TEST_CASE("sa finds the two-spin ferromagnetic ground state") {
  IsingProblem p(2);
  p.add_coupling(0, 1, -1.0);
  const SolveResult res = sa_solve(p, SaSchedule::defaults(), 3);
  CHECK(res.energy == doctest::Approx(-1.0));
  CHECK(res.spins().values[0] == res.spins().values[1]);
}

TEST_CASE("sa with a single-stage degenerate schedule still terminates") {
  IsingProblem p(4);
  p.add_coupling(0, 1, -1.0);
  p.add_coupling(2, 3, 0.5);
  const SolveResult res = sa_solve(p, SaSchedule::fixed(1.0, 1.0), 4);
  CHECK(res.spins().size() == 4);
  CHECK(res.energy == doctest::Approx(p.energy(res.spins())));
}

TEST_CASE("sa is deterministic per seed") {
  const IsingProblem p = random_problem(16, 0.5, 21);
  const SolveResult a = sa_solve(p, SaSchedule::defaults(), 77);
  const SolveResult b = sa_solve(p, SaSchedule::defaults(), 77);
  CHECK(a.energy == b.energy);
  CHECK(a.spins().values == b.spins().values);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("sa result invariants: energy re-evaluates, trace non-increasing") {
  const IsingProblem p = random_problem(14, 0.5, 22);
  const SolveResult res = sa_solve(p, SaSchedule::defaults(), 5);
  CHECK(std::fabs(res.energy - p.energy(res.spins())) <= 1e-9);
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    CHECK(res.trace[i].energy <= res.trace[i - 1].energy);
}

TEST_CASE("sa matches brute force on most small random instances") {
  // reduced-size smoke check; the acceptance suite runs the full
  // 200-instance version of this comparison
  int hits = 0;
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    const IsingProblem p =
        random_problem(12, 0.5, 1000 + static_cast<std::uint64_t>(t));
    const double target = brute_force_solve(p).energy;
    const SolveResult res = sa_solve(p, SaSchedule::defaults(),
                                     9000 + static_cast<std::uint64_t>(t));
    if (res.energy <= target + 1e-9) ++hits;
    CHECK(res.energy >= target - 1e-9);  // oracle dominance
  }
  CHECK(hits >= trials * 8 / 10);
}

TEST_CASE("local refine: 1-flip-optimal config is a fixed point") {
  IsingProblem p(2);
  p.add_coupling(0, 1, -1.0);
  const SpinConfig aligned{{1, 1}};
  CHECK(local_refine(p, aligned).values == aligned.values);
}

TEST_CASE("local refine aligns the two-spin ferromagnet") {
  IsingProblem p(2);
  p.add_coupling(0, 1, -1.0);
  const SpinConfig out = local_refine(p, SpinConfig{{1, -1}});
  CHECK(out.values[0] == out.values[1]);
  CHECK(p.energy(out) == doctest::Approx(-1.0));
}

TEST_CASE("local refine never increases energy (1000 random instances)") {
  Rng meta(31);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + meta.below(10);
    const IsingProblem p = random_problem(n, 0.5, meta.next());
    SpinConfig x;
    x.values.resize(n);
    for (auto& v : x.values) v = meta.coin() ? 1 : -1;
    const SpinConfig out = local_refine(p, x);
    CHECK(p.energy(out) <= p.energy(x) + 1e-12);
  }
}
