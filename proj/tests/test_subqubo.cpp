#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qpr/brute_force.hpp"
#include "qpr/rng.hpp"
#include "qpr/subqubo.hpp"

using namespace qpr;

namespace {

QuboProblem random_qubo(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  QuboProblem q(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (rng.uniform() < 0.7) q.add_entry(i, j, rng.uniform(-1.0, 1.0));
  q.set_offset(rng.uniform(-1.0, 1.0));
  return q;
}

}  // namespace

TEST_CASE("clamped sub-problem energy equals the full energy") {
  Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 4 + rng.below(10);
    const QuboProblem q = random_qubo(n, rng.next());
    BinaryConfig s;
    s.values.resize(n);
    for (auto& b : s.values) b = rng.coin() ? 1 : 0;

    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < n; ++i)
      if (rng.coin()) subset.push_back(i);
    if (subset.empty()) subset.push_back(rng.below(n));

    const QuboProblem sub = clamp_subproblem(q, s, subset);
    BinaryConfig sub_bits;
    for (std::size_t i : subset) sub_bits.values.push_back(s.values[i]);
    CHECK(std::fabs(sub.energy(sub_bits) - q.energy(s)) <= 1e-9);

    // also for a perturbed subset assignment
    BinaryConfig flipped = sub_bits;
    BinaryConfig full = s;
    for (std::size_t a = 0; a < subset.size(); ++a) {
      if (a % 2 == 0) {
        flipped.values[a] ^= 1;
        full.values[subset[a]] ^= 1;
      }
    }
    CHECK(std::fabs(sub.energy(flipped) - q.energy(full)) <= 1e-9);
  }
}

TEST_CASE("subset_size = n is a single inner-solver call") {
  const QuboProblem q = random_qubo(10, 77);
  SubQuboParams params;
  params.subset_size = 10;
  params.rounds = 1;
  const SolveResult res = subqubo_solve(q, params, 3);
  const SolveResult exact = brute_force_solve(q);
  CHECK(res.energy == doctest::Approx(exact.energy).epsilon(1e-12));
}

TEST_CASE("energy is monotone non-increasing across rounds") {
  const QuboProblem q = random_qubo(18, 78);
  SubQuboParams params;
  params.subset_size = 6;
  params.rounds = 15;
  const SolveResult res = subqubo_solve(q, params, 4);
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    CHECK(res.trace[i].energy <= res.trace[i - 1].energy);
  CHECK(std::fabs(res.energy - q.energy(res.bits())) <= 1e-9);
}

TEST_CASE("n=16 subset=8 inner=brute reaches near-optimum on >= 90%") {
  int good = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const QuboProblem q = random_qubo(16, 5000 + static_cast<std::uint64_t>(t));
    const double best = brute_force_solve(q).energy;
    SubQuboParams params;
    params.subset_size = 8;
    params.rounds = 20;
    const SolveResult res =
        subqubo_solve(q, params, 40 + static_cast<std::uint64_t>(t));
    CHECK(res.energy >= best - 1e-9);
    // within 2% of the optimum (scale-aware for near-zero optima)
    const double tol = 0.02 * std::max(1.0, std::fabs(best));
    if (res.energy <= best + tol) ++good;
  }
  CHECK(good >= 90);
}

TEST_CASE("subqubo validates parameters") {
  const QuboProblem q = random_qubo(8, 79);
  SubQuboParams params;
  params.subset_size = 0;
  CHECK_THROWS_AS(subqubo_solve(q, params, 1), std::invalid_argument);
  params.subset_size = 9;
  CHECK_THROWS_AS(subqubo_solve(q, params, 1), std::invalid_argument);
  params.subset_size = 4;
  params.impact_rule = "bogus";
  CHECK_THROWS_AS(subqubo_solve(q, params, 1), std::invalid_argument);
}

TEST_CASE("inner solver failure propagates") {
  const QuboProblem q = random_qubo(8, 80);
  SubQuboParams params;
  params.subset_size = 4;
  params.inner_solver = [](const QuboProblem&, std::uint64_t) -> SolveResult {
    throw std::runtime_error("inner boom");
  };
  CHECK_THROWS_WITH_AS(subqubo_solve(q, params, 1), "inner boom",
                       std::runtime_error);
}

TEST_CASE("subqubo is deterministic per seed") {
  const QuboProblem q = random_qubo(20, 81);
  SubQuboParams params;
  params.subset_size = 7;
  params.rounds = 10;
  const SolveResult a = subqubo_solve(q, params, 6);
  const SolveResult b = subqubo_solve(q, params, 6);
  CHECK(a.energy == b.energy);
  CHECK(a.bits().values == b.bits().values);
}
