#pragma once

// Dense symmetric eigensolver: Householder tridiagonalization followed by the
// implicit-shift QL iteration (EISPACK tred2/tql2 lineage). Deterministic,
// no randomized starts.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <string>
#include <vector>

#include "igaspec/error.hpp"
#include "igaspec/matrix.hpp"

namespace igaspec {

template <std::floating_point T>
struct SymmetricEigen {
  std::vector<T> values;  ///< ascending
  DenseMatrix<T> vectors;  ///< column j pairs with values[j]; empty if not requested
};

namespace detail {

// Storage is the transpose W of the classical V, so that the inner loops
// (which walk V by column) touch contiguous memory. v(a, b) reads V[a][b].
template <std::floating_point T>
class TridiagonalQL {
 public:
  TridiagonalQL(DenseMatrix<T> a, bool want_vectors)
      : n_(a.rows()), w_(std::move(a)), d_(n_), e_(n_), vectors_(want_vectors) {}

  SymmetricEigen<T> run() {
    if (n_ == 0) return {};
    reduce();
    iterate();
    SymmetricEigen<T> out;
    out.values = std::move(d_);
    if (vectors_) out.vectors = w_.transposed();
    return out;
  }

 private:
  T& v(std::size_t a, std::size_t b) { return w_(b, a); }

  void reduce() {
    const std::size_t n = n_;
    for (std::size_t j = 0; j < n; ++j) d_[j] = v(n - 1, j);
    for (std::size_t i = n - 1; i > 0; --i) {
      T scale = 0;
      T h = 0;
      for (std::size_t k = 0; k < i; ++k) scale += std::abs(d_[k]);
      if (scale == 0) {
        e_[i] = d_[i - 1];
        for (std::size_t j = 0; j < i; ++j) {
          d_[j] = v(i - 1, j);
          v(i, j) = 0;
          v(j, i) = 0;
        }
      } else {
        for (std::size_t k = 0; k < i; ++k) {
          d_[k] /= scale;
          h += d_[k] * d_[k];
        }
        T f = d_[i - 1];
        T g = std::sqrt(h);
        if (f > 0) g = -g;
        e_[i] = scale * g;
        h -= f * g;
        d_[i - 1] = f - g;
        for (std::size_t j = 0; j < i; ++j) e_[j] = 0;
        for (std::size_t j = 0; j < i; ++j) {
          f = d_[j];
          v(j, i) = f;
          g = e_[j] + v(j, j) * f;
          auto col = w_.row(j);  // V[k][j] for all k
          for (std::size_t k = j + 1; k < i; ++k) {
            g += col[k] * d_[k];
            e_[k] += col[k] * f;
          }
          e_[j] = g;
        }
        f = 0;
        for (std::size_t j = 0; j < i; ++j) {
          e_[j] /= h;
          f += e_[j] * d_[j];
        }
        const T hh = f / (h + h);
        for (std::size_t j = 0; j < i; ++j) e_[j] -= hh * d_[j];
        for (std::size_t j = 0; j < i; ++j) {
          f = d_[j];
          g = e_[j];
          auto col = w_.row(j);
          for (std::size_t k = j; k < i; ++k) col[k] -= (f * e_[k] + g * d_[k]);
          d_[j] = v(i - 1, j);
          v(i, j) = 0;
        }
      }
      d_[i] = h;
    }

    if (!vectors_) {
      for (std::size_t j = 0; j < n; ++j) d_[j] = v(j, j);
      e_[0] = 0;
      return;
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
      v(n - 1, i) = v(i, i);
      v(i, i) = 1;
      const T h = d_[i + 1];
      if (h != 0) {
        auto next = w_.row(i + 1);  // V[k][i+1]
        for (std::size_t k = 0; k <= i; ++k) d_[k] = next[k] / h;
        for (std::size_t j = 0; j <= i; ++j) {
          auto col = w_.row(j);
          T g = 0;
          for (std::size_t k = 0; k <= i; ++k) g += next[k] * col[k];
          for (std::size_t k = 0; k <= i; ++k) col[k] -= g * d_[k];
        }
      }
      for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0;
    }
    for (std::size_t j = 0; j < n; ++j) {
      d_[j] = v(n - 1, j);
      v(n - 1, j) = 0;
    }
    v(n - 1, n - 1) = 1;
    e_[0] = 0;
  }

  void iterate() {
    const std::size_t n = n_;
    for (std::size_t i = 1; i < n; ++i) e_[i - 1] = e_[i];
    e_[n - 1] = 0;

    T f = 0;
    T tst1 = 0;
    const T eps = std::numeric_limits<T>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
      tst1 = std::max(tst1, std::abs(d_[l]) + std::abs(e_[l]));
      std::size_t m = l;
      while (m < n) {
        if (std::abs(e_[m]) <= eps * tst1) break;
        ++m;
      }
      if (m > l) {
        int iter = 0;
        do {
          if (++iter > 100)
            throw NumericalError("tridiagonal QL iteration did not converge at index " + std::to_string(l));
          T g = d_[l];
          T p = (d_[l + 1] - g) / (T(2) * e_[l]);
          T r = std::hypot(p, T(1));
          if (p < 0) r = -r;
          d_[l] = e_[l] / (p + r);
          d_[l + 1] = e_[l] * (p + r);
          const T dl1 = d_[l + 1];
          T h = g - d_[l];
          for (std::size_t i = l + 2; i < n; ++i) d_[i] -= h;
          f += h;

          p = d_[m];
          T c = 1, c2 = 1, c3 = 1;
          const T el1 = e_[l + 1];
          T s = 0, s2 = 0;
          for (std::size_t i = m; i-- > l;) {
            c3 = c2;
            c2 = c;
            s2 = s;
            g = c * e_[i];
            h = c * p;
            r = std::hypot(p, e_[i]);
            e_[i + 1] = s * r;
            s = e_[i] / r;
            c = p / r;
            p = c * d_[i] - s * g;
            d_[i + 1] = h + s * (c * g + s * d_[i]);
            if (vectors_) {
              auto vi = w_.row(i);
              auto vi1 = w_.row(i + 1);
              for (std::size_t k = 0; k < n; ++k) {
                const T t = vi1[k];
                vi1[k] = s * vi[k] + c * t;
                vi[k] = c * vi[k] - s * t;
              }
            }
          }
          p = -s * s2 * c3 * el1 * e_[l] / dl1;
          e_[l] = s * p;
          d_[l] = c * p;
        } while (std::abs(e_[l]) > eps * tst1);
      }
      d_[l] += f;
      e_[l] = 0;
    }

    // Selection sort keeps the pairing with eigenvector rows of W.
    for (std::size_t i = 0; i + 1 < n; ++i) {
      std::size_t k = i;
      T p = d_[i];
      for (std::size_t j = i + 1; j < n; ++j)
        if (d_[j] < p) {
          k = j;
          p = d_[j];
        }
      if (k != i) {
        d_[k] = d_[i];
        d_[i] = p;
        if (vectors_) std::swap_ranges(w_.row(i).begin(), w_.row(i).end(), w_.row(k).begin());
      }
    }
  }

  std::size_t n_;
  DenseMatrix<T> w_;
  std::vector<T> d_;
  std::vector<T> e_;
  bool vectors_;
};

}  // namespace detail

/// All eigenpairs of a dense symmetric matrix, eigenvalues ascending.
template <std::floating_point T>
SymmetricEigen<T> symmetric_eigen(DenseMatrix<T> a, bool want_vectors = true) {
  if (a.rows() != a.cols()) throw InvalidArgument("symmetric_eigen needs a square matrix");
  return detail::TridiagonalQL<T>(std::move(a), want_vectors).run();
}

}  // namespace igaspec
