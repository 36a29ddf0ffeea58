#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qpr/brute_force.hpp"
#include "qpr/problem.hpp"
#include "qpr/problem_io.hpp"
#include "qpr/rng.hpp"

using namespace qpr;

namespace {

// independent oracle: term-by-term double sums, no shared code with the
// library energy kernels
double oracle_ising(const IsingProblem& p, const SpinConfig& x) {
  const std::size_t n = p.n();
  double e = p.offset();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      e += 0.5 * p.couplings().at(i, j) * x.values[i] * x.values[j];
    e += p.fields()[i] * x.values[i];
  }
  return e;
}

double oracle_qubo(const QuboProblem& p, const BinaryConfig& s) {
  const std::size_t n = p.n();
  double e = p.offset();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      e += p.matrix().at(i, j) * s.values[i] * s.values[j];
  return e;
}

SpinConfig spin_of_bits(std::uint32_t bits, std::size_t n) {
  SpinConfig x;
  x.values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    x.values[i] = (bits >> i) & 1 ? -1 : 1;
  return x;
}

BinaryConfig binary_of_bits(std::uint32_t bits, std::size_t n) {
  BinaryConfig s;
  s.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.values[i] = (bits >> i) & 1;
  return s;
}

IsingProblem random_sparse_copy(const IsingProblem& p) {
  IsingProblem out(p.n(), SymMatrix::Storage::Sparse);
  for (const auto& [i, j, v] : p.couplings().upper_entries())
    out.add_coupling(i, j, v);
  for (std::size_t i = 0; i < p.n(); ++i) out.add_field(i, p.fields()[i]);
  out.set_offset(p.offset());
  return out;
}

}  // namespace

TEST_CASE("ising energy: single free spin is the offset") {
  IsingProblem p(1);
  CHECK(p.energy(SpinConfig{{1}}) == 0.0);
  p.set_offset(2.5);
  CHECK(p.energy(SpinConfig{{-1}}) == 2.5);
}

TEST_CASE("ising energy: two-spin hand expansion with the 1/2 factor") {
  IsingProblem p(2);
  p.add_coupling(0, 1, 1.0);
  CHECK(p.energy(SpinConfig{{1, -1}}) == doctest::Approx(-1.0));
  CHECK(p.energy(SpinConfig{{1, 1}}) == doctest::Approx(1.0));
}

TEST_CASE("ising energy matches the oracle on all configs, n=4") {
  const IsingProblem p = random_problem(4, 0.8, 42);
  for (std::uint32_t bits = 0; bits < 16; ++bits) {
    const SpinConfig x = spin_of_bits(bits, 4);
    CHECK(p.energy(x) == doctest::Approx(oracle_ising(p, x)).epsilon(1e-12));
  }
}

TEST_CASE("ising energy: dimension mismatch is an error") {
  IsingProblem p(3);
  CHECK_THROWS_AS(p.energy(SpinConfig{{1, 1}}), std::invalid_argument);
}

TEST_CASE("qubo energy: all-zero config returns the offset") {
  QuboProblem p(3);
  p.set_offset(0.75);
  CHECK(p.energy(BinaryConfig{{0, 0, 0}}) == 0.75);
}

TEST_CASE("qubo energy: symmetric pair entries sum in the double sum") {
  QuboProblem p(2);
  p.add_entry(0, 1, 1.0);  // Q01 = Q10 = 1
  CHECK(p.energy(BinaryConfig{{1, 1}}) == doctest::Approx(2.0));
}

TEST_CASE("qubo energy matches the oracle on all configs, n=3") {
  Rng rng(7);
  QuboProblem p(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j)
      p.add_entry(i, j, rng.uniform(-1.0, 1.0));
  p.set_offset(0.3);
  for (std::uint32_t bits = 0; bits < 8; ++bits) {
    const BinaryConfig s = binary_of_bits(bits, 3);
    CHECK(p.energy(s) == doctest::Approx(oracle_qubo(p, s)).epsilon(1e-12));
  }
}

TEST_CASE("qubo_to_ising: zero matrix keeps the offset") {
  QuboProblem q(3);
  q.set_offset(1.25);
  const IsingProblem p = qubo_to_ising(q);
  CHECK(p.offset() == 1.25);
  CHECK(p.couplings().max_abs_entry() == 0.0);
  for (double h : p.fields()) CHECK(h == 0.0);
}

TEST_CASE("qubo_to_ising: n=2 hand case") {
  QuboProblem q(2);
  q.add_entry(0, 1, 1.0);
  const IsingProblem p = qubo_to_ising(q);
  CHECK(p.couplings().at(0, 1) == doctest::Approx(0.5));
  CHECK(p.fields()[0] == doctest::Approx(0.5));
  CHECK(p.fields()[1] == doctest::Approx(0.5));
  CHECK(p.offset() == doctest::Approx(0.5));
  // s = (1,1) <-> x = (+1,+1): both energies are 2
  CHECK(q.energy(BinaryConfig{{1, 1}}) == doctest::Approx(2.0));
  CHECK(p.energy(SpinConfig{{1, 1}}) == doctest::Approx(2.0));
}

TEST_CASE("conversion exactness on 50 random problems (exhaustive)") {
  Rng meta(100);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + meta.below(10);
    QuboProblem q(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        if (meta.uniform() < 0.7) q.add_entry(i, j, meta.uniform(-2.0, 2.0));
    q.set_offset(meta.uniform(-1.0, 1.0));
    const IsingProblem p = qubo_to_ising(q);
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
      const BinaryConfig s = binary_of_bits(bits, n);
      const SpinConfig x = spin_of_bits(~bits, n);  // x = 2s - 1
      CHECK(std::fabs(q.energy(s) - p.energy(x)) <= 1e-9);
    }
  }
}

TEST_CASE("ising_to_qubo roundtrip preserves energies") {
  Rng meta(200);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + meta.below(10);
    const IsingProblem p = random_problem(n, 0.6, meta.next());
    const QuboProblem q = ising_to_qubo(p);
    const IsingProblem back = qubo_to_ising(q);
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
      const SpinConfig x = spin_of_bits(bits, n);
      const BinaryConfig s = binary_from_spins(x);
      CHECK(std::fabs(p.energy(x) - q.energy(s)) <= 1e-9);
      CHECK(std::fabs(p.energy(x) - back.energy(x)) <= 1e-9);
    }
  }
}

TEST_CASE("constructors reject asymmetric or diagonal input") {
  CHECK_THROWS_AS(IsingProblem({{0.0, 1.0}, {0.5, 0.0}}, {0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(IsingProblem({{1.0, 0.0}, {0.0, 0.0}}, {0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(QuboProblem({{0.0, 1.0}, {0.5, 0.0}}),
                  std::invalid_argument);
  IsingProblem p(2);
  CHECK_THROWS_AS(p.add_coupling(1, 1, 1.0), std::invalid_argument);
}

TEST_CASE("spin-flip consistency: incremental dE matches re-evaluation") {
  Rng meta(300);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + meta.below(12);
    const IsingProblem p = random_problem(n, 0.5, meta.next());
    SpinConfig x = spin_of_bits(static_cast<std::uint32_t>(meta.next()), n);
    std::vector<double> xd = x.as_doubles();
    std::vector<double> f(n);
    p.local_fields(xd.data(), f.data());
    const double e0 = p.energy(x);
    for (std::size_t k = 0; k < n; ++k) {
      const double de = -2.0 * xd[k] * f[k];
      SpinConfig flipped = x;
      flipped.values[k] = static_cast<std::int8_t>(-flipped.values[k]);
      CHECK(std::fabs((e0 + de) - p.energy(flipped)) <= 1e-9);
    }
  }
}

TEST_CASE("brute force: two-spin tie broken toward (+1,-1)") {
  IsingProblem p(2);
  p.add_coupling(0, 1, 1.0);
  const SolveResult res = brute_force_solve(p);
  CHECK(res.energy == doctest::Approx(-1.0));
  CHECK(res.spins().values == std::vector<std::int8_t>{1, -1});
}

TEST_CASE("brute force: single spin follows -sign(h)") {
  IsingProblem p(1);
  p.add_field(0, 2.0);
  const SolveResult res = brute_force_solve(p);
  CHECK(res.energy == doctest::Approx(-2.0));
  CHECK(res.spins().values == std::vector<std::int8_t>{-1});
}

TEST_CASE("brute force dominates 1000 random configs") {
  const IsingProblem p = random_problem(10, 0.5, 77);
  const SolveResult res = brute_force_solve(p);
  Rng rng(78);
  for (int k = 0; k < 1000; ++k) {
    const SpinConfig x =
        spin_of_bits(static_cast<std::uint32_t>(rng.below(1u << 10)), 10);
    CHECK(res.energy <= p.energy(x) + 1e-9);
  }
  // trace is non-increasing and ends at the reported energy
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    CHECK(res.trace[i].energy <= res.trace[i - 1].energy);
  CHECK(res.trace.back().energy == doctest::Approx(res.energy));
}

TEST_CASE("brute force result is independent of the worker count") {
  // dyadic couplings make increments exact, and the instance has ties
  IsingProblem tied(4);
  tied.add_coupling(0, 1, 1.0);
  tied.add_coupling(2, 3, 1.0);
  const SolveResult one = brute_force_solve(tied, {1});
  for (unsigned workers : {2u, 3u, 5u}) {
    const SolveResult many = brute_force_solve(tied, {workers});
    CHECK(many.energy == one.energy);
    CHECK(many.spins().values == one.spins().values);
  }
  const IsingProblem p = random_problem(11, 0.5, 5150);
  const SolveResult a = brute_force_solve(p, {1});
  const SolveResult b = brute_force_solve(p, {4});
  CHECK(a.energy == doctest::Approx(b.energy).epsilon(1e-12));
  CHECK(a.spins().values == b.spins().values);
}

TEST_CASE("brute force refuses n > 24") {
  const IsingProblem p(25);
  CHECK_THROWS_AS(brute_force_solve(p), std::invalid_argument);
}

TEST_CASE("brute force on QUBO ties toward lexicographically smaller bits") {
  QuboProblem q(2);  // all-zero: every config ties at the offset
  const SolveResult res = brute_force_solve(q);
  CHECK(res.bits().values == std::vector<std::uint8_t>{0, 0});
}

TEST_CASE("random_problem: density 0 has no couplings") {
  const IsingProblem p = random_problem(20, 0.0, 9);
  CHECK(p.couplings().max_abs_entry() == 0.0);
}

TEST_CASE("random_problem: same seed reproduces the problem") {
  const IsingProblem a = random_problem(15, 0.5, 123);
  const IsingProblem b = random_problem(15, 0.5, 123);
  CHECK(a.couplings().upper_entries() == b.couplings().upper_entries());
  CHECK(a.fields() == b.fields());
}

TEST_CASE("random_problem: fill fraction near the requested density") {
  const IsingProblem p = random_problem(100, 0.5, 31);
  std::size_t nonzero = 0;
  for (const auto& [i, j, v] : p.couplings().upper_entries())
    if (i != j && v != 0.0) ++nonzero;
  const double fraction =
      static_cast<double>(nonzero) / (100.0 * 99.0 / 2.0);
  CHECK(fraction == doctest::Approx(0.5).epsilon(0.1));
  CHECK(std::fabs(fraction - 0.5) <= 0.05);
}

TEST_CASE("random_problem rejects a bad density") {
  CHECK_THROWS_AS(random_problem(5, 1.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_problem(5, -0.1, 1), std::invalid_argument);
}

TEST_CASE("sparse and dense storage agree on energies and fields") {
  const IsingProblem dense = random_problem(30, 0.3, 55);
  const IsingProblem sparse = random_sparse_copy(dense);
  CHECK(sparse.couplings().storage() == SymMatrix::Storage::Sparse);
  Rng rng(56);
  for (int trial = 0; trial < 20; ++trial) {
    SpinConfig x;
    x.values.resize(30);
    for (auto& v : x.values) v = rng.coin() ? 1 : -1;
    CHECK(dense.energy(x) == doctest::Approx(sparse.energy(x)).epsilon(1e-12));
    std::vector<double> xd = x.as_doubles(), fd(30), fs(30);
    dense.local_fields(xd.data(), fd.data());
    sparse.local_fields(xd.data(), fs.data());
    for (std::size_t i = 0; i < 30; ++i)
      CHECK(fd[i] == doctest::Approx(fs[i]).epsilon(1e-12));
  }
}

TEST_CASE("problem file roundtrip preserves energies exactly") {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string path = (dir / "qpr_test_problem.txt").string();
  const IsingProblem p = random_problem(8, 0.5, 99);

  save_problem(p, path);
  const AnyProblem loaded = load_problem(path);
  REQUIRE(std::holds_alternative<IsingProblem>(loaded));
  const IsingProblem& q = std::get<IsingProblem>(loaded);
  for (std::uint32_t bits = 0; bits < 256; ++bits) {
    const SpinConfig x = spin_of_bits(bits, 8);
    CHECK(p.energy(x) == q.energy(x));
  }
  std::filesystem::remove(path);
}

TEST_CASE("problem loader rejects duplicates and malformed lines") {
  {
    std::istringstream in(
        "qpr-problem v1\ntype ising\nn 3\nc 0 1 0.5\nc 0 1 0.25\n");
    CHECK_THROWS_WITH_AS(read_problem(in, "dup"),
                         doctest::Contains("dup:5"), std::runtime_error);
  }
  {
    std::istringstream in("qpr-problem v1\ntype ising\nn 3\nc 1 0 0.5\n");
    CHECK_THROWS_AS(read_problem(in, "tri"), std::runtime_error);
  }
  {
    std::istringstream in("qpr-problem v1\ntype ising\nn 2\nf 0 abc\n");
    CHECK_THROWS_WITH_AS(read_problem(in, "bad"),
                         doctest::Contains("bad:4"), std::runtime_error);
  }
  {
    std::istringstream in("nonsense\n");
    CHECK_THROWS_AS(read_problem(in, "hdr"), std::runtime_error);
  }
}

TEST_CASE("qubo file roundtrip keeps the diagonal in the f-lines") {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string path = (dir / "qpr_test_qubo.txt").string();
  QuboProblem q(3);
  q.add_entry(0, 1, -0.5);
  q.add_entry(1, 1, 2.0);
  q.set_offset(0.125);
  save_problem(q, path);
  const AnyProblem loaded = load_problem(path);
  REQUIRE(std::holds_alternative<QuboProblem>(loaded));
  const QuboProblem& r = std::get<QuboProblem>(loaded);
  CHECK(r.matrix().at(0, 1) == -0.5);
  CHECK(r.matrix().at(1, 1) == 2.0);
  CHECK(r.offset() == 0.125);
  std::filesystem::remove(path);
}
