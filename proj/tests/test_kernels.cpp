#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "qpr/kernels.hpp"
#include "qpr/rng.hpp"

using namespace qpr;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo = -1.0,
                               double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

std::vector<double> random_sym(Rng& rng, std::size_t n) {
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      m[i * n + j] = m[j * n + i] = rng.uniform(-1.0, 1.0);
  return m;
}

// independent reference: plain triple-checked loops
double naive_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

bool close(double a, double b, double tol = 1e-10) {
  return std::fabs(a - b) <= tol * (1.0 + std::fabs(a) + std::fabs(b));
}

std::vector<kernels::Backend> available_backends() {
  std::vector<kernels::Backend> out{kernels::Backend::Scalar};
  if (kernels::backend_available(kernels::Backend::Avx2))
    out.push_back(kernels::Backend::Avx2);
  return out;
}

struct BackendGuard {
  kernels::Backend saved;
  BackendGuard() : saved(kernels::active_backend()) {}
  ~BackendGuard() { kernels::force_backend(saved); }
};

}  // namespace

TEST_CASE("dot agrees with the reference on every backend") {
  BackendGuard guard;
  Rng rng(11);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 17u, 64u, 129u}) {
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);
    const double want = naive_dot(a, b);
    for (auto backend : available_backends()) {
      kernels::force_backend(backend);
      CHECK(close(kernels::dot(a.data(), b.data(), n), want));
    }
  }
}

TEST_CASE("dot is exact on integer-valued input across backends") {
  BackendGuard guard;
  Rng rng(12);
  const std::size_t n = 53;
  std::vector<double> a(n), b(n);
  for (auto& v : a) v = static_cast<double>(static_cast<int>(rng.below(9)) - 4);
  for (auto& v : b) v = static_cast<double>(static_cast<int>(rng.below(9)) - 4);
  kernels::force_backend(kernels::Backend::Scalar);
  const double scalar = kernels::dot(a.data(), b.data(), n);
  for (auto backend : available_backends()) {
    kernels::force_backend(backend);
    CHECK(kernels::dot(a.data(), b.data(), n) == scalar);
  }
}

TEST_CASE("dense_fields matches the reference") {
  BackendGuard guard;
  Rng rng(13);
  for (std::size_t n : {1u, 5u, 16u, 33u}) {
    const auto m = random_sym(rng, n);
    const auto x = random_vec(rng, n);
    const auto h = random_vec(rng, n);
    std::vector<double> want(n);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = h[i];
      for (std::size_t j = 0; j < n; ++j) acc += m[i * n + j] * x[j];
      want[i] = acc;
    }
    for (auto backend : available_backends()) {
      kernels::force_backend(backend);
      std::vector<double> out(n);
      kernels::dense_fields(m.data(), x.data(), h.data(), out.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(close(out[i], want[i]));
    }
  }
}

TEST_CASE("energy kernels match the double-loop reference") {
  BackendGuard guard;
  Rng rng(14);
  const std::size_t n = 23;
  const auto m = random_sym(rng, n);
  const auto h = random_vec(rng, n);
  std::vector<double> x(n);
  for (auto& xi : x) xi = rng.coin() ? 1.0 : -1.0;
  std::vector<double> s(n);
  for (auto& si : s) si = rng.coin() ? 1.0 : 0.0;

  double spin_want = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      spin_want += 0.5 * m[i * n + j] * x[i] * x[j];
    spin_want += h[i] * x[i];
  }
  double quad_want = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) quad_want += m[i * n + j] * s[i] * s[j];

  for (auto backend : available_backends()) {
    kernels::force_backend(backend);
    CHECK(close(kernels::dense_spin_energy(m.data(), x.data(), h.data(), n),
                spin_want));
    CHECK(close(kernels::dense_quad_energy(m.data(), s.data(), n), quad_want));
  }
}

TEST_CASE("sign_pm1 maps zero to +1 on every backend") {
  BackendGuard guard;
  const std::vector<double> x{-2.0, -0.0, 0.0, 0.5, -0.5, 3.0, 0.0, -1.0, 7.0};
  for (auto backend : available_backends()) {
    kernels::force_backend(backend);
    std::vector<double> out(x.size());
    kernels::sign_pm1(x.data(), out.data(), x.size());
    const std::vector<double> want{-1, 1, 1, 1, -1, 1, 1, -1, 1};
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(out[i] == want[i]);
  }
}

TEST_CASE("sb_update wall rule clamps and zeroes momentum") {
  BackendGuard guard;
  for (auto backend : available_backends()) {
    kernels::force_backend(backend);
    // positions driven over the wall by one large kick
    std::vector<double> x{0.9, -0.9, 0.1, 0.2, 0.3};
    std::vector<double> y{1.0, -1.0, 0.0, 0.0, 0.0};
    std::vector<double> f(5, 0.0);
    const std::size_t hits =
        kernels::sb_update(x.data(), y.data(), f.data(), /*dt=*/1.0,
                           /*a0=*/1.0, /*delta=*/0.0, /*c0=*/0.0, 5);
    CHECK(hits == 2);
    CHECK(x[0] == 1.0);
    CHECK(y[0] == 0.0);
    CHECK(x[1] == -1.0);
    CHECK(y[1] == 0.0);
    CHECK(x[2] == doctest::Approx(0.1));
  }
}

TEST_CASE("sb_update free drift: y unchanged, x drifts by dt*a0*y") {
  BackendGuard guard;
  for (auto backend : available_backends()) {
    kernels::force_backend(backend);
    std::vector<double> x{0.1, -0.2, 0.0, 0.05};
    std::vector<double> y{0.01, 0.02, -0.03, 0.0};
    const std::vector<double> y0 = y;
    const std::vector<double> x0 = x;
    std::vector<double> f(4, 0.0);
    kernels::sb_update(x.data(), y.data(), f.data(), 0.5, 2.0, 0.0, 1.0, 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(y[i] == y0[i]);
      CHECK(x[i] == doctest::Approx(x0[i] + 0.5 * 2.0 * y0[i]));
    }
  }
}

TEST_CASE("scalar and AVX2 sb_update agree over many steps") {
  if (!kernels::backend_available(kernels::Backend::Avx2)) return;
  BackendGuard guard;
  Rng rng(15);
  const std::size_t n = 37;
  std::vector<double> xs = random_vec(rng, n, -0.1, 0.1);
  std::vector<double> ys = random_vec(rng, n, -0.1, 0.1);
  std::vector<double> xa = xs, ya = ys;
  for (int step = 0; step < 200; ++step) {
    const auto f = random_vec(rng, n);
    kernels::force_backend(kernels::Backend::Scalar);
    kernels::sb_update(xs.data(), ys.data(), f.data(), 0.1, 1.0, 0.5, 0.3, n);
    kernels::force_backend(kernels::Backend::Avx2);
    kernels::sb_update(xa.data(), ya.data(), f.data(), 0.1, 1.0, 0.5, 0.3, n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(close(xs[i], xa[i], 1e-9));
    CHECK(close(ys[i], ya[i], 1e-9));
  }
}
