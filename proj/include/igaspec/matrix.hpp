#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "igaspec/error.hpp"

namespace igaspec {

/// Row-major dense matrix.
template <std::floating_point T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<T>> rows) {
    DenseMatrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != m.cols_) throw InvalidArgument("ragged matrix initializer");
      std::copy(row.begin(), row.end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * m.cols_));
      ++i;
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  T operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> data() const noexcept { return data_; }

  T max_abs() const {
    T m = 0;
    for (T v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<T> multiply(std::span<const T> x) const {
    std::vector<T> y(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      T s = 0;
      for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  template <std::floating_point U>
  DenseMatrix<U> cast() const {
    DenseMatrix<U> m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = static_cast<U>((*this)(i, j));
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <std::floating_point T>
DenseMatrix<T> kron(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  DenseMatrix<T> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const T aij = a(i, j);
      if (aij == 0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

template <std::floating_point T>
DenseMatrix<T>& operator+=(DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("matrix size mismatch");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ra = a.row(i);
    auto rb = b.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) ra[j] += rb[j];
  }
  return a;
}

/// Symmetric banded matrix; only the lower band (i - bandwidth <= j <= i) is stored.
template <std::floating_point T>
class SymBandMatrix {
 public:
  SymBandMatrix() = default;
  SymBandMatrix(std::size_t n, std::size_t bandwidth)
      : n_(n), bw_(bandwidth), data_(n * (bandwidth + 1), T(0)) {}

  std::size_t size() const noexcept { return n_; }
  std::size_t bandwidth() const noexcept { return bw_; }

  bool in_band(std::size_t i, std::size_t j) const noexcept { return (i >= j ? i - j : j - i) <= bw_; }

  /// Entry (i, j) of the full symmetric matrix; zero outside the band.
  T operator()(std::size_t i, std::size_t j) const {
    if (i < j) std::swap(i, j);
    if (i - j > bw_) return T(0);
    return data_[i * (bw_ + 1) + (i - j)];
  }

  /// Adds v to the stored entry for (i, j) with i >= j.
  void add_lower(std::size_t i, std::size_t j, T v) { data_[i * (bw_ + 1) + (i - j)] += v; }

  std::vector<T> multiply(std::span<const T> x) const {
    std::vector<T> y(n_, T(0));
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t j0 = i >= bw_ ? i - bw_ : 0;
      T s = (*this)(i, i) * x[i];
      for (std::size_t j = j0; j < i; ++j) {
        const T a = data_[i * (bw_ + 1) + (i - j)];
        s += a * x[j];
        y[j] += a * x[i];
      }
      y[i] += s;
    }
    return y;
  }

  /// x^T A y
  T bilinear(std::span<const T> x, std::span<const T> y) const {
    const auto ay = multiply(y);
    T s = 0;
    for (std::size_t i = 0; i < n_; ++i) s += x[i] * ay[i];
    return s;
  }

  T max_abs() const {
    T m = 0;
    for (T v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  DenseMatrix<T> to_dense() const {
    DenseMatrix<T> d(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) d(i, j) = (*this)(i, j);
    return d;
  }

  /// Principal submatrix on rows/columns [first, first + count).
  SymBandMatrix principal(std::size_t first, std::size_t count) const {
    SymBandMatrix s(count, bw_);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = (i >= bw_ ? i - bw_ : 0); j <= i; ++j) s.add_lower(i, j, (*this)(first + i, first + j));
    return s;
  }

  template <std::floating_point U>
  SymBandMatrix<U> cast() const {
    SymBandMatrix<U> m(n_, bw_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = (i >= bw_ ? i - bw_ : 0); j <= i; ++j) m.add_lower(i, j, static_cast<U>((*this)(i, j)));
    return m;
  }

 private:
  std::size_t n_ = 0;
  std::size_t bw_ = 0;
  std::vector<T> data_;
};

/// Lower-triangular Cholesky factor stored densely (L L^T = A).
template <std::floating_point T>
class CholeskyFactor {
 public:
  explicit CholeskyFactor(DenseMatrix<T> lower, std::size_t bandwidth)
      : l_(std::move(lower)), bw_(bandwidth) {}

  std::size_t size() const noexcept { return l_.rows(); }
  const DenseMatrix<T>& lower() const noexcept { return l_; }

  /// In-place x <- L^{-1} x.
  void solve_lower(std::span<T> x) const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j0 = i >= bw_ ? i - bw_ : 0;
      T s = x[i];
      for (std::size_t j = j0; j < i; ++j) s -= l_(i, j) * x[j];
      x[i] = s / l_(i, i);
    }
  }

  /// In-place x <- L^{-T} x.
  void solve_upper(std::span<T> x) const {
    const std::size_t n = size();
    for (std::size_t ii = n; ii-- > 0;) {
      const std::size_t j1 = std::min(n, ii + bw_ + 1);
      T s = x[ii];
      for (std::size_t j = ii + 1; j < j1; ++j) s -= l_(j, ii) * x[j];
      x[ii] = s / l_(ii, ii);
    }
  }

  std::size_t bandwidth() const noexcept { return bw_; }

 private:
  DenseMatrix<T> l_;
  std::size_t bw_;
};

namespace detail {

template <std::floating_point T, typename Entry>
CholeskyFactor<T> cholesky_impl(std::size_t n, std::size_t bw, Entry entry) {
  DenseMatrix<T> l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k0 = j >= bw ? j - bw : 0;
    T d = entry(j, j);
    for (std::size_t k = k0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0) || !std::isfinite(static_cast<double>(d)))
      throw NotPositiveDefiniteError(
          "matrix is not positive definite (Cholesky pivot " + std::to_string(j) + " is not positive)", j);
    const T ljj = std::sqrt(d);
    l(j, j) = ljj;
    const std::size_t i1 = std::min(n, j + bw + 1);
    for (std::size_t i = j + 1; i < i1; ++i) {
      T s = entry(i, j);
      const std::size_t kk = std::max(k0, i >= bw ? i - bw : std::size_t{0});
      for (std::size_t k = kk; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return CholeskyFactor<T>(std::move(l), bw);
}

}  // namespace detail

template <std::floating_point T>
CholeskyFactor<T> cholesky(const SymBandMatrix<T>& a) {
  return detail::cholesky_impl<T>(a.size(), a.bandwidth(), [&](std::size_t i, std::size_t j) { return a(i, j); });
}

template <std::floating_point T>
CholeskyFactor<T> cholesky(const DenseMatrix<T>& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("Cholesky needs a square matrix");
  const std::size_t n = a.rows();
  return detail::cholesky_impl<T>(n, n == 0 ? 0 : n - 1,
                                  [&](std::size_t i, std::size_t j) { return (a(i, j) + a(j, i)) / 2; });
}

}  // namespace igaspec
