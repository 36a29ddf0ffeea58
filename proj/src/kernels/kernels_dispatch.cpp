#include "qpr/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>

namespace qpr::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(QPR_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend resolve_initial() {
  if (const char* env = std::getenv("QPR_KERNEL")) {
    const std::string v(env);
    if (v == "scalar") return Backend::Scalar;
    if (v == "avx2") {
      if (!backend_available(Backend::Avx2))
        throw std::runtime_error("QPR_KERNEL=avx2 but AVX2 is unavailable");
      return Backend::Avx2;
    }
    if (v != "auto" && !v.empty())
      throw std::runtime_error("unknown QPR_KERNEL value: " + v);
  }
  return backend_available(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<const Ops*>& active_ops_slot() {
  static std::atomic<const Ops*> slot{nullptr};
  return slot;
}

std::atomic<Backend>& active_backend_slot() {
  static std::atomic<Backend> slot{Backend::Scalar};
  return slot;
}

const Ops* ops_for(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return &scalar_ops();
    case Backend::Avx2:
#if defined(QPR_BUILD_AVX2)
      return &avx2_ops();
#else
      break;
#endif
  }
  return nullptr;
}

const Ops& active() {
  const Ops* ops = active_ops_slot().load(std::memory_order_acquire);
  if (!ops) {
    const Backend b = resolve_initial();
    ops = ops_for(b);
    active_backend_slot().store(b, std::memory_order_release);
    active_ops_slot().store(ops, std::memory_order_release);
  }
  return *ops;
}

}  // namespace

bool backend_available(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
      return cpu_has_avx2();
  }
  return false;
}

Backend active_backend() {
  active();
  return active_backend_slot().load(std::memory_order_acquire);
}

void force_backend(Backend b) {
  if (!backend_available(b))
    throw std::runtime_error("kernel backend unavailable: " +
                             backend_name(b));
  active_backend_slot().store(b, std::memory_order_release);
  active_ops_slot().store(ops_for(b), std::memory_order_release);
}

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
  }
  return "?";
}

double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}

void dense_fields(const double* m, const double* x, const double* h,
                  double* out, std::size_t n) {
  active().dense_fields(m, x, h, out, n);
}

double dense_spin_energy(const double* m, const double* x, const double* h,
                         std::size_t n) {
  return active().dense_spin_energy(m, x, h, n);
}

double dense_quad_energy(const double* m, const double* s, std::size_t n) {
  return active().dense_quad_energy(m, s, n);
}

void sign_pm1(const double* x, double* out, std::size_t n) {
  active().sign_pm1(x, out, n);
}

std::size_t sb_update(double* x, double* y, const double* f, double dt,
                      double a0, double delta, double c0, std::size_t n) {
  return active().sb_update(x, y, f, dt, a0, delta, c0, n);
}

}  // namespace qpr::kernels
