#include "qpr/problem.hpp"

#include <cmath>
#include <stdexcept>

#include "qpr/rng.hpp"

namespace qpr {

SpinConfig spins_from_binary(const BinaryConfig& s) {
  SpinConfig x;
  x.values.reserve(s.values.size());
  for (auto b : s.values)
    x.values.push_back(b ? std::int8_t{1} : std::int8_t{-1});
  return x;
}

BinaryConfig binary_from_spins(const SpinConfig& x) {
  BinaryConfig s;
  s.values.reserve(x.values.size());
  for (auto v : x.values)
    s.values.push_back(v > 0 ? std::uint8_t{1} : std::uint8_t{0});
  return s;
}

IsingProblem::IsingProblem(std::size_t n) : n_(n), j_(n), h_(n, 0.0) {
  if (n == 0) throw std::invalid_argument("IsingProblem: n must be >= 1");
}

IsingProblem::IsingProblem(std::size_t n, SymMatrix::Storage storage)
    : n_(n), j_(n, storage), h_(n, 0.0) {
  if (n == 0) throw std::invalid_argument("IsingProblem: n must be >= 1");
}

IsingProblem::IsingProblem(std::vector<std::vector<double>> j,
                           std::vector<double> h, double offset)
    : IsingProblem(j.size()) {
  if (h.size() != n_)
    throw std::invalid_argument("IsingProblem: field size mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    if (j[i].size() != n_)
      throw std::invalid_argument("IsingProblem: J is not square");
    if (j[i][i] != 0.0)
      throw std::invalid_argument("IsingProblem: J diagonal must be zero");
    for (std::size_t k = i + 1; k < n_; ++k) {
      if (j[i][k] != j[k][i])
        throw std::invalid_argument("IsingProblem: J is not symmetric");
      if (j[i][k] != 0.0) j_.add(i, k, j[i][k]);
    }
  }
  h_ = std::move(h);
  offset_ = offset;
}

void IsingProblem::add_coupling(std::size_t i, std::size_t j, double v) {
  if (i == j)
    throw std::invalid_argument("IsingProblem: diagonal coupling not allowed");
  j_.add(i, j, v);
}

void IsingProblem::add_field(std::size_t i, double v) {
  if (i >= n_) throw std::out_of_range("IsingProblem: field index");
  h_[i] += v;
}

double IsingProblem::energy(const SpinConfig& x) const {
  if (x.size() != n_)
    throw std::invalid_argument("IsingProblem: config size mismatch");
  const auto xd = x.as_doubles();
  return energy(xd.data());
}

double IsingProblem::energy(const double* x) const {
  return j_.spin_energy(x, h_.data()) + offset_;
}

void IsingProblem::local_fields(const double* x, double* out) const {
  j_.fields(x, h_.data(), out);
}

QuboProblem::QuboProblem(std::size_t n) : n_(n), q_(n) {
  if (n == 0) throw std::invalid_argument("QuboProblem: n must be >= 1");
}

QuboProblem::QuboProblem(std::size_t n, SymMatrix::Storage storage)
    : n_(n), q_(n, storage) {
  if (n == 0) throw std::invalid_argument("QuboProblem: n must be >= 1");
}

QuboProblem::QuboProblem(std::vector<std::vector<double>> q, double offset)
    : QuboProblem(q.size()) {
  for (std::size_t i = 0; i < n_; ++i) {
    if (q[i].size() != n_)
      throw std::invalid_argument("QuboProblem: Q is not square");
    for (std::size_t k = i; k < n_; ++k) {
      if (q[i][k] != q[k][i])
        throw std::invalid_argument("QuboProblem: Q is not symmetric");
      if (q[i][k] != 0.0) q_.add(i, k, q[i][k]);
    }
  }
  offset_ = offset;
}

void QuboProblem::add_entry(std::size_t i, std::size_t j, double v) {
  q_.add(i, j, v);
}

void QuboProblem::add_pair_term(std::size_t i, std::size_t j, double w) {
  if (i == j) throw std::invalid_argument("add_pair_term needs i != j");
  q_.add(i, j, 0.5 * w);
}

void QuboProblem::add_linear(std::size_t i, double w) { q_.add(i, i, w); }

double QuboProblem::energy(const BinaryConfig& s) const {
  if (s.size() != n_)
    throw std::invalid_argument("QuboProblem: config size mismatch");
  const auto sd = s.as_doubles();
  return energy(sd.data());
}

double QuboProblem::energy(const double* s) const {
  return q_.quad_energy(s) + offset_;
}

void QuboProblem::row_fields(const double* s, double* out) const {
  q_.fields(s, nullptr, out);
}

void trace_improvement(std::vector<TracePoint>& trace, std::int64_t step,
                       double e) {
  if (trace.empty() || e < trace.back().energy) trace.push_back({step, e});
}

double ising_energy(const IsingProblem& p, const SpinConfig& x) {
  return p.energy(x);
}

double qubo_energy(const QuboProblem& p, const BinaryConfig& s) {
  return p.energy(s);
}

IsingProblem qubo_to_ising(const QuboProblem& p) {
  const std::size_t n = p.n();
  IsingProblem out(n, p.matrix().storage());
  std::vector<double> row_sums(n, 0.0);
  double offdiag_sum = 0.0;
  double diag_sum = 0.0;
  for (const auto& [i, j, v] : p.matrix().upper_entries()) {
    if (i == j) {
      diag_sum += v;
      row_sums[i] += v;
    } else {
      offdiag_sum += 2.0 * v;  // both (i,j) and (j,i)
      row_sums[i] += v;
      row_sums[j] += v;
      out.add_coupling(i, j, 0.5 * v);
    }
  }
  for (std::size_t i = 0; i < n; ++i) out.add_field(i, 0.5 * row_sums[i]);
  out.set_offset(p.offset() + 0.25 * offdiag_sum + 0.5 * diag_sum);
  return out;
}

QuboProblem ising_to_qubo(const IsingProblem& p) {
  const std::size_t n = p.n();
  QuboProblem out(n, p.couplings().storage());
  std::vector<double> row_sums(n, 0.0);
  double offdiag_sum = 0.0;
  for (const auto& [i, j, v] : p.couplings().upper_entries()) {
    if (i == j) continue;  // constructor guarantees zero diagonal
    out.add_entry(i, j, 2.0 * v);
    row_sums[i] += v;
    row_sums[j] += v;
    offdiag_sum += 2.0 * v;
  }
  double field_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double hi = p.fields()[i];
    field_sum += hi;
    const double diag = 2.0 * hi - 2.0 * row_sums[i];
    if (diag != 0.0) out.add_entry(i, i, diag);
  }
  out.set_offset(p.offset() + 0.5 * offdiag_sum - field_sum);
  return out;
}

IsingProblem random_problem(std::size_t n, double density,
                            std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random_problem: n must be >= 1");
  if (!(density >= 0.0 && density <= 1.0))
    throw std::invalid_argument("random_problem: density must be in [0,1]");
  IsingProblem p(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double keep = rng.uniform();
      const double value = rng.uniform(-1.0, 1.0);
      if (keep < density && value != 0.0) p.add_coupling(i, j, value);
    }
  }
  for (std::size_t i = 0; i < n; ++i) p.add_field(i, rng.uniform(-1.0, 1.0));
  return p;
}

}  // namespace qpr
