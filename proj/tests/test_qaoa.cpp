#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "qpr/brute_force.hpp"
#include "qpr/qaoa.hpp"
#include "qpr/rng.hpp"

using namespace qpr;

namespace {

double uniform_mean_energy(const IsingProblem& p) {
  // oracle: plain average over all configurations
  const auto energies = diagonal_energies(p);
  double acc = 0.0;
  for (double e : energies) acc += e;
  return acc / static_cast<double>(energies.size()) + p.offset();
}

QaoaParams random_params(Rng& rng, std::size_t depth, double scale = 1.0) {
  QaoaParams params;
  params.betas.resize(depth);
  params.gammas.resize(depth);
  for (auto& b : params.betas) b = rng.uniform(-scale, scale);
  for (auto& g : params.gammas) g = rng.uniform(-scale, scale);
  return params;
}

}  // namespace

TEST_CASE("uniform superposition amplitudes and norm") {
  const StateVector sv1 = uniform_superposition(1);
  CHECK(sv1.amplitudes.size() == 2);
  CHECK(sv1.amplitudes[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(sv1.amplitudes[1].real() == doctest::Approx(1.0 / std::sqrt(2.0)));

  const StateVector sv3 = uniform_superposition(3);
  for (const auto& a : sv3.amplitudes) {
    CHECK(a.real() == doctest::Approx(std::pow(2.0, -1.5)));
    CHECK(a.imag() == 0.0);
  }
  CHECK(sv3.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(uniform_superposition(0), std::invalid_argument);
  CHECK_THROWS_AS(uniform_superposition(21), std::invalid_argument);
}

TEST_CASE("sampling the uniform state is binomial within 5 sigma") {
  const std::size_t n = 4;
  const StateVector sv = uniform_superposition(n);
  const std::uint64_t shots = 10000;
  const auto counts = sample(sv, shots, 42);
  std::uint64_t total = 0;
  const double mean = static_cast<double>(shots) / 16.0;
  const double sigma = std::sqrt(mean * (1.0 - 1.0 / 16.0));
  for (std::uint64_t z = 0; z < 16; ++z) {
    const auto it = counts.find(z);
    const double c = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    CHECK(std::fabs(c - mean) < 5.0 * sigma);
    total += it == counts.end() ? 0 : it->second;
  }
  CHECK(total == shots);
}

TEST_CASE("cost layer: gamma = 0 is the identity") {
  const IsingProblem p = random_problem(4, 0.7, 11);
  StateVector sv = uniform_superposition(4);
  const auto before = sv.amplitudes;
  apply_cost_layer(sv, p, 0.0);
  CHECK(sv.amplitudes == before);
}

TEST_CASE("cost layer: single-qubit relative phase e^{-2i gamma}") {
  IsingProblem p(1);
  p.add_field(0, 1.0);
  StateVector sv = uniform_superposition(1);
  const double gamma = 0.37;
  apply_cost_layer(sv, p, gamma);
  // |0> has x=+1, E=+1; |1> has x=-1, E=-1
  const std::complex<double> ratio = sv.amplitudes[0] / sv.amplitudes[1];
  CHECK(ratio.real() == doctest::Approx(std::cos(2.0 * gamma)));
  CHECK(ratio.imag() == doctest::Approx(-std::sin(2.0 * gamma)));
  CHECK(sv.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mixer layer: beta = 0 identity; beta = pi/2 maps |0> to -i|1>") {
  StateVector sv = uniform_superposition(1);
  const auto before = sv.amplitudes;
  apply_mixer_layer(sv, 0.0);
  CHECK(sv.amplitudes == before);

  StateVector basis;
  basis.n = 1;
  basis.amplitudes = {{1.0, 0.0}, {0.0, 0.0}};
  apply_mixer_layer(basis, 1.5707963267948966);
  CHECK(std::abs(basis.amplitudes[0]) < 1e-12);
  CHECK(basis.amplitudes[1].real() == doctest::Approx(0.0));
  CHECK(basis.amplitudes[1].imag() == doctest::Approx(-1.0));
}

TEST_CASE("same-axis mixer rotations compose") {
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const double b1 = rng.uniform(-1.5, 1.5);
    const double b2 = rng.uniform(-1.5, 1.5);
    StateVector a = uniform_superposition(3);
    IsingProblem p = random_problem(3, 0.9, 13);
    apply_cost_layer(a, p, 0.4);  // some non-trivial state
    StateVector b = a;
    apply_mixer_layer(a, b1);
    apply_mixer_layer(a, b2);
    apply_mixer_layer(b, b1 + b2);
    for (std::size_t z = 0; z < a.amplitudes.size(); ++z)
      CHECK(std::abs(a.amplitudes[z] - b.amplitudes[z]) < 1e-12);
  }
}

TEST_CASE("unitarity: norm preserved through deep layer stacks") {
  const IsingProblem p = random_problem(6, 0.5, 14);
  Rng rng(15);
  StateVector sv = uniform_superposition(6);
  for (int layer = 0; layer < 20; ++layer) {
    apply_cost_layer(sv, p, rng.uniform(-2.0, 2.0));
    apply_mixer_layer(sv, rng.uniform(-2.0, 2.0));
    CHECK(std::fabs(sv.norm_sq() - 1.0) < 1e-12);
  }
}

TEST_CASE("zero angles give the uniform average energy") {
  const IsingProblem p = random_problem(5, 0.6, 16);
  QaoaParams params;
  params.betas = {0.0, 0.0};
  params.gammas = {0.0, 0.0};
  CHECK(qaoa_expectation(p, params) ==
        doctest::Approx(uniform_mean_energy(p)).epsilon(1e-10));
}

TEST_CASE("single qubit p=1 reaches the exact minimum via a grid scan") {
  IsingProblem p(1);
  p.add_field(0, 1.0);
  double best = 1e9;
  for (int ib = 0; ib < 80; ++ib) {
    for (int ig = 0; ig < 80; ++ig) {
      QaoaParams params;
      params.betas = {-1.6 + 0.04 * ib};
      params.gammas = {-1.6 + 0.04 * ig};
      best = std::min(best, qaoa_expectation(p, params));
    }
  }
  CHECK(best <= -1.0 + 1e-3);
}

TEST_CASE("variational bound: expectation >= exact ground energy") {
  Rng rng(17);
  for (int inst = 0; inst < 5; ++inst) {
    const IsingProblem p = random_problem(6, 0.5, 600 + inst);
    const double ground = brute_force_solve(p).energy;
    for (int draw = 0; draw < 200; ++draw) {
      const QaoaParams params = random_params(rng, 1 + rng.below(3));
      CHECK(qaoa_expectation(p, params) >= ground - 1e-9);
    }
  }
}

TEST_CASE("offset neutrality: constant shifts pass through exactly") {
  const IsingProblem p = random_problem(5, 0.5, 18);
  IsingProblem shifted = p;
  shifted.set_offset(p.offset() + 3.25);
  Rng rng(19);
  for (int draw = 0; draw < 20; ++draw) {
    const QaoaParams params = random_params(rng, 2);
    const double a = qaoa_expectation(p, params);
    const double b = qaoa_expectation(shifted, params);
    CHECK(b - a == doctest::Approx(3.25).epsilon(1e-12));
  }
}

TEST_CASE("schedule-seeded angles: p = 8 is no worse than p = 1 on average") {
  double sum1 = 0.0, sum8 = 0.0;
  for (int inst = 0; inst < 12; ++inst) {
    const IsingProblem p = random_problem(6, 0.5, 700 + inst);
    sum1 += qaoa_expectation(p, schedule_seeded_params(1));
    sum8 += qaoa_expectation(p, schedule_seeded_params(8));
  }
  CHECK(sum8 <= sum1 + 1e-9);
}

TEST_CASE("optimizer beats the uniform baseline on every instance") {
  for (int inst = 0; inst < 6; ++inst) {
    const IsingProblem p = random_problem(6, 0.5, 800 + inst);
    const auto [params, res] = qaoa_optimize(p, 3, 5, 900 + inst);
    QaoaParams zero;
    zero.betas = {0.0, 0.0, 0.0};
    zero.gammas = {0.0, 0.0, 0.0};
    CHECK(qaoa_expectation(p, params) <=
          qaoa_expectation(p, zero) + 1e-9);
    CHECK(res.energy == doctest::Approx(p.energy(res.spins())));
  }
}

TEST_CASE("optimized p=3 boosts ground-state sampling on most instances") {
  int boosted = 0;
  const int trials = 10;
  for (int inst = 0; inst < trials; ++inst) {
    const IsingProblem p = random_problem(6, 0.5, 1000 + inst);
    const SolveResult exact = brute_force_solve(p);
    const auto [params, res] = qaoa_optimize(p, 3, 10, 4000 + inst);
    const StateVector sv = qaoa_state(p, params);
    // probability mass on configurations at the ground energy
    const auto energies = diagonal_energies(p);
    double pg = 0.0;
    for (std::size_t z = 0; z < energies.size(); ++z)
      if (energies[z] + p.offset() <= exact.energy + 1e-9)
        pg += std::norm(sv.amplitudes[z]);
    if (pg >= 5.0 / 64.0) ++boosted;
  }
  CHECK(boosted >= 7);
}

TEST_CASE("qaoa_optimize rejects depth 0 and oversized problems") {
  const IsingProblem p = random_problem(4, 0.5, 20);
  CHECK_THROWS_AS(qaoa_optimize(p, 0, 1, 1), std::invalid_argument);
}

TEST_CASE("sampling: basis state gets all shots; counts always sum") {
  StateVector basis;
  basis.n = 2;
  basis.amplitudes = {{0, 0}, {0, 0}, {1, 0}, {0, 0}};
  const auto counts = sample(basis, 500, 7);
  REQUIRE(counts.size() == 1);
  CHECK(counts.at(2) == 500);

  const StateVector sv = uniform_superposition(5);
  const auto c2 = sample(sv, 12345, 8);
  std::uint64_t total = 0;
  for (const auto& [z, c] : c2) total += c;
  CHECK(total == 12345);

  const auto c3 = sample(sv, 12345, 8);
  CHECK(c2 == c3);  // deterministic per seed
}
