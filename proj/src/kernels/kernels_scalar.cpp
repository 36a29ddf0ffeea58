#include "qpr/kernels.hpp"

#include <cmath>

namespace qpr::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void dense_fields_scalar(const double* m, const double* x, const double* h,
                         double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = m + i * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
    out[i] = acc + (h ? h[i] : 0.0);
  }
}

double dense_spin_energy_scalar(const double* m, const double* x,
                                const double* h, std::size_t n) {
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = m + i * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
    e += x[i] * (0.5 * acc + (h ? h[i] : 0.0));
  }
  return e;
}

double dense_quad_energy_scalar(const double* m, const double* s,
                                std::size_t n) {
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = m + i * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * s[j];
    e += s[i] * acc;
  }
  return e;
}

void sign_pm1_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] >= 0.0 ? 1.0 : -1.0;
}

std::size_t sb_update_scalar(double* x, double* y, const double* f, double dt,
                             double a0, double delta, double c0,
                             std::size_t n) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += dt * (-delta * x[i] - c0 * f[i]);
    x[i] += dt * a0 * y[i];
    if (std::fabs(x[i]) > 1.0) {
      x[i] = x[i] > 0.0 ? 1.0 : -1.0;
      y[i] = 0.0;
      ++hits;
    }
  }
  return hits;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{dot_scalar,          dense_fields_scalar,
                       dense_spin_energy_scalar, dense_quad_energy_scalar,
                       sign_pm1_scalar,     sb_update_scalar};
  return ops;
}

}  // namespace qpr::kernels
