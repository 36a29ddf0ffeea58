#include "qpr/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qpr/kernels.hpp"

namespace qpr {

SymMatrix::SymMatrix(std::size_t n, Storage storage)
    : n_(n), storage_(storage) {
  if (storage_ == Storage::Dense) {
    dense_.assign(n_ * n_, 0.0);
  } else {
    index_ok_ = false;
  }
}

void SymMatrix::add(std::size_t i, std::size_t j, double v) {
  if (i >= n_ || j >= n_) throw std::out_of_range("SymMatrix::add index");
  if (v == 0.0) return;
  if (storage_ == Storage::Dense) {
    dense_[i * n_ + j] += v;
    if (i != j) dense_[j * n_ + i] += v;
  } else {
    if (i <= j)
      coo_.push_back({static_cast<std::uint32_t>(i),
                      static_cast<std::uint32_t>(j), v});
    else
      coo_.push_back({static_cast<std::uint32_t>(j),
                      static_cast<std::uint32_t>(i), v});
    index_ok_ = false;
  }
}

void SymMatrix::ensure_index() const {
  if (index_ok_) return;
  // merge duplicate COO entries, then build a CSR over both triangles
  auto sorted = coo_;
  std::sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });
  std::vector<Entry> merged;
  merged.reserve(sorted.size());
  for (const auto& e : sorted) {
    if (!merged.empty() && merged.back().i == e.i && merged.back().j == e.j)
      merged.back().v += e.v;
    else
      merged.push_back(e);
  }
  std::vector<std::size_t> counts(n_ + 1, 0);
  for (const auto& e : merged) {
    ++counts[e.i + 1];
    if (e.i != e.j) ++counts[e.j + 1];
  }
  row_ptr_.assign(n_ + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) row_ptr_[i + 1] = row_ptr_[i] + counts[i + 1];
  cols_.assign(row_ptr_[n_], 0);
  vals_.assign(row_ptr_[n_], 0.0);
  std::vector<std::size_t> cursor(row_ptr_.begin(), row_ptr_.end() - 1);
  for (const auto& e : merged) {
    cols_[cursor[e.i]] = e.j;
    vals_[cursor[e.i]] = e.v;
    ++cursor[e.i];
    if (e.i != e.j) {
      cols_[cursor[e.j]] = e.i;
      vals_[cursor[e.j]] = e.v;
      ++cursor[e.j];
    }
  }
  index_ok_ = true;
}

double SymMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw std::out_of_range("SymMatrix::at index");
  if (storage_ == Storage::Dense) return dense_[i * n_ + j];
  ensure_index();
  for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
    if (cols_[k] == j) return vals_[k];
  return 0.0;
}

void SymMatrix::fields(const double* x, const double* h, double* out) const {
  if (storage_ == Storage::Dense) {
    kernels::dense_fields(dense_.data(), x, h, out, n_);
    return;
  }
  ensure_index();
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      acc += vals_[k] * x[cols_[k]];
    out[i] = acc + (h ? h[i] : 0.0);
  }
}

double SymMatrix::spin_energy(const double* x, const double* h) const {
  if (storage_ == Storage::Dense)
    return kernels::dense_spin_energy(dense_.data(), x, h, n_);
  ensure_index();
  double e = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      acc += vals_[k] * x[cols_[k]];
    e += x[i] * (0.5 * acc + (h ? h[i] : 0.0));
  }
  return e;
}

double SymMatrix::quad_energy(const double* s) const {
  if (storage_ == Storage::Dense)
    return kernels::dense_quad_energy(dense_.data(), s, n_);
  ensure_index();
  double e = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      acc += vals_[k] * s[cols_[k]];
    e += s[i] * acc;
  }
  return e;
}

void SymMatrix::for_each_in_row(
    std::size_t i, const std::function<void(std::size_t, double)>& fn) const {
  if (storage_ == Storage::Dense) {
    const double* row = dense_.data() + i * n_;
    for (std::size_t j = 0; j < n_; ++j)
      if (row[j] != 0.0) fn(j, row[j]);
    return;
  }
  ensure_index();
  for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
    fn(cols_[k], vals_[k]);
}

std::vector<std::tuple<std::size_t, std::size_t, double>>
SymMatrix::upper_entries() const {
  std::vector<std::tuple<std::size_t, std::size_t, double>> out;
  if (storage_ == Storage::Dense) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j)
        if (dense_[i * n_ + j] != 0.0) out.emplace_back(i, j, dense_[i * n_ + j]);
    return out;
  }
  ensure_index();
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (cols_[k] >= i) out.emplace_back(i, cols_[k], vals_[k]);
  std::sort(out.begin(), out.end());
  return out;
}

double SymMatrix::offdiag_sum_sq() const {
  double acc = 0.0;
  if (storage_ == Storage::Dense) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (i != j) acc += dense_[i * n_ + j] * dense_[i * n_ + j];
    return acc;
  }
  ensure_index();
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (cols_[k] != i) acc += vals_[k] * vals_[k];
  return acc;
}

double SymMatrix::max_entry() const {
  double m = 0.0;
  bool any = false;
  auto visit = [&](double v) {
    if (!any || v > m) m = v;
    any = true;
  };
  if (storage_ == Storage::Dense) {
    for (double v : dense_) visit(v);
  } else {
    ensure_index();
    // absent entries are zero
    visit(0.0);
    for (double v : vals_) visit(v);
  }
  return any ? m : 0.0;
}

double SymMatrix::max_abs_entry() const {
  double m = 0.0;
  if (storage_ == Storage::Dense) {
    for (double v : dense_) m = std::max(m, std::fabs(v));
  } else {
    ensure_index();
    for (double v : vals_) m = std::max(m, std::fabs(v));
  }
  return m;
}

}  // namespace qpr
