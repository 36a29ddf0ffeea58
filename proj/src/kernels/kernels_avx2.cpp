#include "qpr/kernels.hpp"

#if defined(QPR_BUILD_AVX2)

#include <immintrin.h>

#include <cmath>

namespace qpr::kernels {
namespace {

inline double hsum256(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
  }
  double acc = hsum256(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void dense_fields_avx2(const double* m, const double* x, const double* h,
                       double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = dot_avx2(m + i * n, x, n) + (h ? h[i] : 0.0);
  }
}

double dense_spin_energy_avx2(const double* m, const double* x,
                              const double* h, std::size_t n) {
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    e += x[i] * (0.5 * dot_avx2(m + i * n, x, n) + (h ? h[i] : 0.0));
  }
  return e;
}

double dense_quad_energy_avx2(const double* m, const double* s,
                              std::size_t n) {
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    e += s[i] * dot_avx2(m + i * n, s, n);
  }
  return e;
}

void sign_pm1_avx2(const double* x, double* out, std::size_t n) {
  const __m256d ones = _mm256_set1_pd(1.0);
  const __m256d signbit = _mm256_set1_pd(-0.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    // x < 0 -> -1, else +1 (so sign(0) == +1, and sign(-0.0) == +1 as well
    // because -0.0 < 0 is false)
    const __m256d neg = _mm256_cmp_pd(v, zero, _CMP_LT_OQ);
    const __m256d s =
        _mm256_or_pd(ones, _mm256_and_pd(neg, signbit));
    _mm256_storeu_pd(out + i, s);
  }
  for (; i < n; ++i) out[i] = x[i] >= 0.0 ? 1.0 : -1.0;
}

std::size_t sb_update_avx2(double* x, double* y, const double* f, double dt,
                           double a0, double delta, double c0,
                           std::size_t n) {
  const __m256d vdt_delta = _mm256_set1_pd(dt * delta);
  const __m256d vdt_c0 = _mm256_set1_pd(dt * c0);
  const __m256d vdt_a0 = _mm256_set1_pd(dt * a0);
  const __m256d ones = _mm256_set1_pd(1.0);
  const __m256d absmask = _mm256_castsi256_pd(
      _mm256_set1_epi64x(0x7fffffffffffffffLL));
  const __m256d signbit = _mm256_set1_pd(-0.0);
  std::size_t hits = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vx = _mm256_loadu_pd(x + i);
    __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d vf = _mm256_loadu_pd(f + i);
    vy = _mm256_fnmadd_pd(vdt_delta, vx, vy);
    vy = _mm256_fnmadd_pd(vdt_c0, vf, vy);
    vx = _mm256_fmadd_pd(vdt_a0, vy, vx);
    const __m256d vabs = _mm256_and_pd(vx, absmask);
    const __m256d over = _mm256_cmp_pd(vabs, ones, _CMP_GT_OQ);
    const int mask = _mm256_movemask_pd(over);
    if (mask != 0) {
      const __m256d clamped =
          _mm256_or_pd(ones, _mm256_and_pd(vx, signbit));
      vx = _mm256_blendv_pd(vx, clamped, over);
      vy = _mm256_andnot_pd(over, vy);
      hits += static_cast<std::size_t>(__builtin_popcount(mask));
    }
    _mm256_storeu_pd(x + i, vx);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) {
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

const Ops& avx2_ops() {
  static const Ops ops{dot_avx2,          dense_fields_avx2,
                       dense_spin_energy_avx2, dense_quad_energy_avx2,
                       sign_pm1_avx2,     sb_update_avx2};
  return ops;
}

}  // namespace qpr::kernels

#endif  // QPR_BUILD_AVX2
