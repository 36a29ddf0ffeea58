#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qpr/brute_force.hpp"
#include "qpr/rng.hpp"
#include "qpr/sb.hpp"

using namespace qpr;

TEST_CASE("sb_step free particle: y unchanged, x drifts by dt*a0*y") {
  IsingProblem p(3);  // J = 0, h = 0
  SbParams params;
  params.c0 = 1.0;
  params.dt = 0.25;
  params.a0 = 2.0;
  SbState state{{0.1, -0.1, 0.0}, {0.02, 0.0, -0.01}, 0.0};
  const SbState before = state;
  sb_step(state, p, params, params.a0);  // pump = a0: no confinement force
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(state.y[i] == before.y[i]);
    CHECK(state.x[i] ==
          doctest::Approx(before.x[i] + params.dt * params.a0 * before.y[i]));
  }
}

TEST_CASE("sb_step wall: overshoot clamps x and zeroes y") {
  IsingProblem p(1);
  SbParams params;
  params.c0 = 1.0;
  params.dt = 1.0;
  params.a0 = 1.0;
  SbState state{{0.5}, {0.7}, 0.0};  // x + dt*a0*y = 1.2 > 1
  sb_step(state, p, params, params.a0);
  CHECK(state.x[0] == 1.0);
  CHECK(state.y[0] == 0.0);
}

TEST_CASE("sb_step rejects non-finite state and out-of-range pump") {
  IsingProblem p(1);
  SbParams params;
  SbState bad{{std::nan("")}, {0.0}, 0.0};
  CHECK_THROWS_AS(sb_step(bad, p, params, 0.0), std::invalid_argument);
  SbState ok{{0.0}, {0.0}, 0.0};
  CHECK_THROWS_AS(sb_step(ok, p, params, params.a0 * 2.0),
                  std::invalid_argument);
}

TEST_CASE("momentum update reads the position snapshot (simultaneous)") {
  // two coupled oscillators: after one step, y_i must reflect the OLD x_j
  IsingProblem p(2);
  p.add_coupling(0, 1, -1.0);
  SbParams params;
  params.variant = SbVariant::Ballistic;
  params.a0 = 1.0;
  params.c0 = 0.5;
  params.dt = 0.125;
  SbState s{{0.2, -0.4}, {0.0, 0.0}, 0.0};
  const double x0 = s.x[0], x1 = s.x[1];
  const double pump = 0.25;
  sb_step(s, p, params, pump);
  // force_i = -(a0 - pump) x_i - c0 (J_ij x_j + h_i), from old x
  const double f0 = -(1.0 - pump) * x0 - 0.5 * (-1.0 * x1);
  const double f1 = -(1.0 - pump) * x1 - 0.5 * (-1.0 * x0);
  CHECK(s.y[0] == doctest::Approx(params.dt * f0));
  CHECK(s.y[1] == doctest::Approx(params.dt * f1));
  CHECK(s.x[0] == doctest::Approx(x0 + params.dt * 1.0 * s.y[0]));
  CHECK(s.x[1] == doctest::Approx(x1 + params.dt * 1.0 * s.y[1]));
}

TEST_CASE("both variants solve the two-spin ferromagnet") {
  IsingProblem p(2);
  p.add_coupling(0, 1, -1.0);
  for (auto variant : {SbVariant::Ballistic, SbVariant::Discrete}) {
    SbParams params;
    params.variant = variant;
    const SolveResult res = sb_solve(p, params, 11);
    CHECK(res.energy == doctest::Approx(-1.0));
    CHECK(res.spins().values[0] == res.spins().values[1]);
  }
}

TEST_CASE("single spin with a positive field lands on -1") {
  IsingProblem p(1);
  p.add_field(0, 1.0);
  p.set_offset(0.25);
  for (auto variant : {SbVariant::Ballistic, SbVariant::Discrete}) {
    SbParams params;
    params.variant = variant;
    const SolveResult res = sb_solve(p, params, 2);
    CHECK(res.spins().values == std::vector<std::int8_t>{-1});
    CHECK(res.energy == doctest::Approx(-1.0 + 0.25));
  }
}

TEST_CASE("sb_solve is bit-for-bit deterministic per seed") {
  const IsingProblem p = random_problem(20, 0.5, 5);
  SbParams params;
  const SolveResult a = sb_solve(p, params, 123);
  const SolveResult b = sb_solve(p, params, 123);
  CHECK(a.energy == b.energy);
  CHECK(a.spins().values == b.spins().values);
  CHECK(a.evaluations == b.evaluations);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].step == b.trace[i].step);
    CHECK(a.trace[i].energy == b.trace[i].energy);
  }
}

TEST_CASE("auto_c0 hand values, fallback and scaling") {
  IsingProblem p(2);
  p.add_coupling(0, 1, 1.0);  // sigma_J = 1
  CHECK(auto_c0(p, 1.0) == doctest::Approx(0.5 / std::sqrt(2.0)));
  CHECK(auto_c0(p, 3.0) == doctest::Approx(3.0 * 0.5 / std::sqrt(2.0)));

  IsingProblem zero(4);  // J = 0
  CHECK(auto_c0(zero, 1.5) == 1.5);

  IsingProblem scaled(2);
  scaled.add_coupling(0, 1, 10.0);
  CHECK(auto_c0(scaled, 1.0) == doctest::Approx(auto_c0(p, 1.0) / 10.0));
}

TEST_CASE("frozen-pump oscillator energy drifts below 1% over 1000 steps") {
  const IsingProblem p = random_problem(8, 0.8, 404);
  SbParams params;
  params.variant = SbVariant::Ballistic;
  params.a0 = 1.0;
  params.c0 = 1e-3;
  params.dt = 0.01;
  Rng rng(17);
  SbState state;
  state.x.resize(8);
  state.y.resize(8);
  for (auto& v : state.x) v = rng.uniform(-0.1, 0.1);
  for (auto& v : state.y) v = rng.uniform(-0.1, 0.1);

  const double e0 = sb_hamiltonian(state, p, params.a0, params.c0, params.a0);
  REQUIRE(std::fabs(e0) > 1e-4);  // meaningful scale for the relative drift
  double max_drift = 0.0;
  for (int step = 0; step < 1000; ++step) {
    sb_step(state, p, params, params.a0);
    for (double x : state.x) REQUIRE(std::fabs(x) < 1.0);  // no wall hits
    const double e =
        sb_hamiltonian(state, p, params.a0, params.c0, params.a0);
    max_drift = std::max(max_drift, std::fabs(e - e0));
  }
  CHECK(max_drift / std::fabs(e0) < 0.01);
}

TEST_CASE("sb energy equals re-evaluation and trace is non-increasing") {
  const IsingProblem p = random_problem(15, 0.5, 6);
  SbParams params;
  const SolveResult res = sb_solve(p, params, 9);
  CHECK(std::fabs(res.energy - p.energy(res.spins())) <= 1e-9);
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    CHECK(res.trace[i].energy <= res.trace[i - 1].energy);
}

TEST_CASE("dsb matches brute force on most small instances (smoke)") {
  // acceptance criterion 2 runs the full 200-instance suite
  int hits = 0;
  const int trials = 30;
  for (int t = 0; t < trials; ++t) {
    const IsingProblem p =
        random_problem(12, 0.5, 2000 + static_cast<std::uint64_t>(t));
    const double target = brute_force_solve(p).energy;
    SbParams params;
    params.variant = SbVariant::Discrete;
    const SolveResult res =
        sb_solve(p, params, 100 + static_cast<std::uint64_t>(t));
    CHECK(res.energy >= target - 1e-9);
    if (res.energy <= target + 1e-9) ++hits;
  }
  CHECK(hits >= trials * 8 / 10);
}
