#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <tuple>
#include <vector>

namespace qpr {

/// Symmetric real matrix used for Ising couplings and QUBO matrices.
/// Stored dense (row-major) up to kDenseLimit variables, coordinate-list +
/// CSR beyond that (or on request). Mutation happens through symmetric
/// accumulators; the sparse index is rebuilt lazily before any evaluation.
class SymMatrix {
 public:
  enum class Storage { Dense, Sparse };
  static constexpr std::size_t kDenseLimit = 4096;

  SymMatrix() = default;
  explicit SymMatrix(std::size_t n)
      : SymMatrix(n, n <= kDenseLimit ? Storage::Dense : Storage::Sparse) {}
  SymMatrix(std::size_t n, Storage storage);

  std::size_t n() const { return n_; }
  Storage storage() const { return storage_; }

  /// Adds v at (i,j) and, when i != j, at (j,i).
  void add(std::size_t i, std::size_t j, double v);
  double at(std::size_t i, std::size_t j) const;

  /// out = M x + h (h may be null).
  void fields(const double* x, const double* h, double* out) const;
  /// sum_i x_i (0.5 (M x)_i + h_i)
  double spin_energy(const double* x, const double* h) const;
  /// sum_ij M_ij s_i s_j
  double quad_energy(const double* s) const;

  /// Visits the nonzeros of row i (dense: all columns).
  void for_each_in_row(std::size_t i,
                       const std::function<void(std::size_t, double)>& fn)
      const;

  /// Upper-triangle nonzeros (i <= j), sorted by (i, j).
  std::vector<std::tuple<std::size_t, std::size_t, double>> upper_entries()
      const;

  /// sum over i != j of M_ij^2
  double offdiag_sum_sq() const;
  double max_entry() const;
  double max_abs_entry() const;

  const double* dense_data() const {
    return storage_ == Storage::Dense ? dense_.data() : nullptr;
  }

 private:
  void ensure_index() const;

  std::size_t n_ = 0;
  Storage storage_ = Storage::Dense;
  std::vector<double> dense_;

  // sparse: upper-triangle COO accumulated on add(); CSR over both
  // triangles built on demand
  struct Entry {
    std::uint32_t i, j;
    double v;
  };
  std::vector<Entry> coo_;
  mutable bool index_ok_ = true;
  mutable std::vector<std::size_t> row_ptr_;
  mutable std::vector<std::uint32_t> cols_;
  mutable std::vector<double> vals_;
};

}  // namespace qpr
