#pragma once

#include <cstddef>
#include <string>

// Data-parallel inner loops shared by the solvers and energy evaluation.
// Every operation has a scalar reference implementation and, on x86-64
// builds, an AVX2+FMA variant. The active backend is resolved once per
// process: the QPR_KERNEL environment variable ("scalar", "avx2", "auto")
// wins, otherwise the best backend the CPU supports is used. Backends are
// equivalence-tested against the scalar reference; summation order differs
// between backends, so cross-backend agreement is to rounding, not bitwise.

namespace qpr::kernels {

enum class Backend { Scalar, Avx2 };

struct Ops {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // out[i] = h[i] + sum_j m[i*n + j] * x[j]; h may be null (treated as 0)
  void (*dense_fields)(const double* m, const double* x, const double* h,
                       double* out, std::size_t n);
  // sum_i x[i] * (0.5 * (M x)_i + h[i])
  double (*dense_spin_energy)(const double* m, const double* x,
                              const double* h, std::size_t n);
  // sum_ij m[i*n+j] s[i] s[j]  (diagonal counted once)
  double (*dense_quad_energy)(const double* m, const double* s,
                              std::size_t n);
  // out[i] = x[i] >= 0 ? +1 : -1
  void (*sign_pm1)(const double* x, double* out, std::size_t n);
  // y[i] += dt * (-delta * x[i] - c0 * f[i]);
  // x[i] += dt * a0 * y[i];
  // if |x[i]| > 1: x[i] = sign(x[i]), y[i] = 0.   Returns wall-hit count.
  std::size_t (*sb_update)(double* x, double* y, const double* f, double dt,
                           double a0, double delta, double c0, std::size_t n);
};

const Ops& scalar_ops();
#if defined(QPR_BUILD_AVX2)
const Ops& avx2_ops();
#endif

bool backend_available(Backend b);
Backend active_backend();
/// Overrides the process-wide backend (tests, CLI). Throws if unavailable.
void force_backend(Backend b);
std::string backend_name(Backend b);

/// Active-backend entry points.
double dot(const double* a, const double* b, std::size_t n);
void dense_fields(const double* m, const double* x, const double* h,
                  double* out, std::size_t n);
double dense_spin_energy(const double* m, const double* x, const double* h,
                         std::size_t n);
double dense_quad_energy(const double* m, const double* s, std::size_t n);
void sign_pm1(const double* x, double* out, std::size_t n);
std::size_t sb_update(double* x, double* y, const double* f, double dt,
                      double a0, double delta, double c0, std::size_t n);

}  // namespace qpr::kernels
