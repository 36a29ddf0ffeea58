#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qpr/matrix.hpp"

namespace qpr {

/// Spin configuration, entries in {-1, +1}.
struct SpinConfig {
  std::vector<std::int8_t> values;

  std::size_t size() const { return values.size(); }
  std::vector<double> as_doubles() const {
    return std::vector<double>(values.begin(), values.end());
  }
  bool operator==(const SpinConfig&) const = default;
};

/// Binary configuration, entries in {0, 1}.
struct BinaryConfig {
  std::vector<std::uint8_t> values;

  std::size_t size() const { return values.size(); }
  std::vector<double> as_doubles() const {
    return std::vector<double>(values.begin(), values.end());
  }
  bool operator==(const BinaryConfig&) const = default;
};

/// x = 2s - 1
SpinConfig spins_from_binary(const BinaryConfig& s);
/// s = (x + 1) / 2
BinaryConfig binary_from_spins(const SpinConfig& x);

/// Minimization target (1/2) sum_ij J_ij x_i x_j + sum_i h_i x_i + offset
/// over x in {-1,+1}^n. J is symmetric with a hard zero diagonal.
class IsingProblem {
 public:
  explicit IsingProblem(std::size_t n);
  IsingProblem(std::size_t n, SymMatrix::Storage storage);
  /// Dense constructor; rejects asymmetric J or a nonzero diagonal.
  IsingProblem(std::vector<std::vector<double>> j, std::vector<double> h,
               double offset = 0.0);

  std::size_t n() const { return n_; }
  const SymMatrix& couplings() const { return j_; }
  const std::vector<double>& fields() const { return h_; }
  double offset() const { return offset_; }
  void set_offset(double v) { offset_ = v; }

  /// Accumulates on J_ij and J_ji; i == j is rejected.
  void add_coupling(std::size_t i, std::size_t j, double v);
  void add_field(std::size_t i, double v);

  double energy(const SpinConfig& x) const;
  double energy(const double* x) const;  // x_i in {-1,+1}, offset included
  /// out_i = sum_j J_ij x_j + h_i
  void local_fields(const double* x, double* out) const;

 private:
  std::size_t n_;
  SymMatrix j_;
  std::vector<double> h_;
  double offset_ = 0.0;
};

/// Minimization target sum_ij Q_ij s_i s_j + offset over s in {0,1}^n
/// (full double sum: an off-diagonal pair contributes Q_ij + Q_ji, the
/// diagonal once). Linear terms live on the diagonal since s^2 = s.
class QuboProblem {
 public:
  explicit QuboProblem(std::size_t n);
  QuboProblem(std::size_t n, SymMatrix::Storage storage);
  /// Dense constructor; rejects asymmetric Q.
  QuboProblem(std::vector<std::vector<double>> q, double offset = 0.0);

  std::size_t n() const { return n_; }
  const SymMatrix& matrix() const { return q_; }
  double offset() const { return offset_; }
  void set_offset(double v) { offset_ = v; }

  /// Accumulates v on Q_ij and (for i != j) Q_ji: total energy
  /// contribution is 2v per kept off-diagonal pair, v for diagonal.
  void add_entry(std::size_t i, std::size_t j, double v);
  /// Adds w to the energy coefficient of the product s_i s_j (i != j),
  /// i.e. Q_ij += w/2 on both sides.
  void add_pair_term(std::size_t i, std::size_t j, double w);
  /// Adds w to the linear coefficient of s_i (diagonal).
  void add_linear(std::size_t i, double w);

  double energy(const BinaryConfig& s) const;
  double energy(const double* s) const;
  /// out_i = (Q s)_i
  void row_fields(const double* s, double* out) const;

 private:
  std::size_t n_;
  SymMatrix q_;
  double offset_ = 0.0;
};

/// Energy trace point: (step index, best-so-far energy).
struct TracePoint {
  std::int64_t step;
  double energy;
};

/// Output of every solver in the repo.
struct SolveResult {
  std::variant<SpinConfig, BinaryConfig> config;
  double energy = 0.0;
  std::vector<TracePoint> trace;
  std::uint64_t evaluations = 0;
  double wall_time = 0.0;  // seconds around the solver loop only
  std::uint64_t seed = 0;
  std::string solver_id;

  const SpinConfig& spins() const { return std::get<SpinConfig>(config); }
  const BinaryConfig& bits() const { return std::get<BinaryConfig>(config); }
};

/// Appends (step, e) if e improves on the current best; keeps the trace
/// non-increasing by construction.
void trace_improvement(std::vector<TracePoint>& trace, std::int64_t step,
                       double e);

double ising_energy(const IsingProblem& p, const SpinConfig& x);
double qubo_energy(const QuboProblem& p, const BinaryConfig& s);

/// J_ij = Q_ij / 2 (i != j), h_i = sum_j Q_ij / 2, offset carried so that
/// energies agree exactly under x = 2s - 1.
IsingProblem qubo_to_ising(const QuboProblem& p);
/// Inverse map with offset bookkeeping; roundtrips preserve energies.
QuboProblem ising_to_qubo(const IsingProblem& p);

/// Symmetric J with the given off-diagonal fill fraction, entries and
/// fields uniform in [-1, 1]; reproducible per seed.
IsingProblem random_problem(std::size_t n, double density,
                            std::uint64_t seed);

}  // namespace qpr
