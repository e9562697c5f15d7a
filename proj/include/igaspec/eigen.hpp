#pragma once

// Symmetric-definite generalized eigenproblem K U = lambda M U.
//
// M = L L^T, the standard problem C = L^{-1} K L^{-T} is solved densely and
// eigenvectors are mapped back as U = L^{-T} Y, which makes them
// M-orthonormal. Optionally every eigenvalue is replaced by the Rayleigh
// quotient of its eigenvector against the original K and M; this recovers
// relative accuracy for the smallest eigenvalues, whose absolute error from
// the dense solve is of order eps * ||C||.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <memory>
#include <numeric>
#include <vector>

#include "igaspec/assembly.hpp"
#include "igaspec/error.hpp"
#include "igaspec/matrix.hpp"
#include "igaspec/spectrum.hpp"
#include "igaspec/symmetric_eigen.hpp"

namespace igaspec {

struct SolveOptions {
  bool eigenvectors = true;
  bool rayleigh_refine = false;  ///< implies eigenvectors are computed
};

namespace detail {

template <std::floating_point T, typename KMat, typename MMat>
Spectrum<T> solve_generalized_impl(const KMat& k, const MMat& m, std::size_t n, const CholeskyFactor<T>& chol,
                                   SolveOptions opts) {
  if (n == 0) return {};
  // C = L^{-1} K L^{-T}, built in two passes of row-wise forward solves.
  DenseMatrix<T> work(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = work.row(i);
    for (std::size_t j = 0; j < n; ++j) r[j] = k(i, j);
    chol.solve_lower(r);  // row i now holds (L^{-1} K e_i)^T
  }
  work = work.transposed();
  for (std::size_t i = 0; i < n; ++i) chol.solve_lower(work.row(i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const T s = (work(i, j) + work(j, i)) / 2;
      work(i, j) = work(j, i) = s;
    }

  const bool want_vectors = opts.eigenvectors || opts.rayleigh_refine;
  auto eig = symmetric_eigen(std::move(work), want_vectors);

  Spectrum<T> out;
  out.eigenvalues = std::move(eig.values);
  if (!want_vectors) return out;

  // U = L^{-T} Y, computed on the rows of Y^T.
  DenseMatrix<T> ut = eig.vectors.transposed();
  for (std::size_t j = 0; j < n; ++j) chol.solve_upper(ut.row(j));

  if (opts.rayleigh_refine) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<T> refined(n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto u = ut.row(j);
      const auto ku = k.multiply(u);
      const auto mu = m.multiply(u);
      T num = 0, den = 0;
      for (std::size_t i = 0; i < n; ++i) {
        num += u[i] * ku[i];
        den += u[i] * mu[i];
      }
      refined[j] = num / den;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return refined[a] < refined[b]; });
    DenseMatrix<T> sorted(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      out.eigenvalues[j] = refined[order[j]];
      const auto src = ut.row(order[j]);
      std::copy(src.begin(), src.end(), sorted.row(j).begin());
    }
    ut = std::move(sorted);
  }
  if (opts.eigenvectors) out.eigenvectors = ut.transposed();
  return out;
}

}  // namespace detail

template <std::floating_point T>
Spectrum<T> solve_generalized(const SymBandMatrix<T>& k, const SymBandMatrix<T>& m, SolveOptions opts = {}) {
  if (k.size() != m.size()) throw InvalidArgument("K and M sizes differ");
  const auto chol = cholesky(m);
  auto out = detail::solve_generalized_impl<T>(k, m, k.size(), chol, opts);
  out.mass = std::make_shared<const SymBandMatrix<T>>(m);
  return out;
}

template <std::floating_point T>
Spectrum<T> solve_generalized(const OperatorPair<T>& ops, SolveOptions opts = {}) {
  return solve_generalized(ops.K, ops.M, opts);
}

template <std::floating_point T>
Spectrum<T> solve_generalized(const DenseMatrix<T>& k, const DenseMatrix<T>& m, SolveOptions opts = {}) {
  if (k.rows() != k.cols() || m.rows() != m.cols() || k.rows() != m.rows())
    throw InvalidArgument("K and M must be square and of equal size");
  const auto chol = cholesky(m);
  return detail::solve_generalized_impl<T>(k, m, k.rows(), chol, opts);
}

/// Spectrum of a Kronecker operator from one 1D solve: every d-dimensional
/// eigenvalue is a sum of d 1D eigenvalues, and the eigenvectors are
/// Kronecker products of 1D eigenvectors.
template <std::floating_point T>
Spectrum<T> solve_tensor(const KroneckerOperator<T>& op, SolveOptions opts = {.eigenvectors = false}) {
  const int d = op.dims();
  if (d < 1 || d > 3) throw InvalidArgument("tensor spectra support 1 to 3 dimensions");
  const auto& f0 = op.factors.front();
  for (const auto& f : op.factors) {
    if (f.dimension() != f0.dimension()) throw InvalidArgument("mismatched Kronecker factor dimensions");
    for (std::size_t i = 0; i < f.dimension(); ++i)
      for (std::size_t j = (i >= f.K.bandwidth() ? i - f.K.bandwidth() : 0); j <= i; ++j)
        if (f.K(i, j) != f0.K(i, j) || f.M(i, j) != f0.M(i, j))
          throw InvalidArgument("solve_tensor requires identical 1D factors");
  }
  const bool want_vectors = opts.eigenvectors;
  const auto one = solve_generalized(f0, SolveOptions{want_vectors, opts.rayleigh_refine});
  const std::size_t n1 = one.size();
  const auto& lam = one.eigenvalues;

  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= n1;
  struct Entry {
    T value;
    std::array<int, 3> idx;
  };
  std::vector<Entry> entries;
  entries.reserve(total);
  std::array<std::size_t, 3> ext{n1, d >= 2 ? n1 : 1, d >= 3 ? n1 : 1};
  for (std::size_t a = 0; a < ext[0]; ++a)
    for (std::size_t b = 0; b < ext[1]; ++b)
      for (std::size_t c = 0; c < ext[2]; ++c) {
        T v = lam[a];
        std::array<int, 3> idx{static_cast<int>(a) + 1, 0, 0};
        if (d >= 2) {
          v += lam[b];
          idx[1] = static_cast<int>(b) + 1;
        }
        if (d >= 3) {
          v += lam[c];
          idx[2] = static_cast<int>(c) + 1;
        }
        entries.push_back({v, idx});
      }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& l, const Entry& r) { return l.value < r.value; });

  Spectrum<T> out;
  out.eigenvalues.reserve(total);
  out.tensor_indices.reserve(total);
  for (const auto& e : entries) {
    out.eigenvalues.push_back(e.value);
    out.tensor_indices.push_back(e.idx);
  }
  if (want_vectors) {
    const auto& u1 = *one.eigenvectors;
    DenseMatrix<T> u(total, total);
    for (std::size_t col = 0; col < total; ++col) {
      const auto& idx = out.tensor_indices[col];
      for (std::size_t a = 0; a < ext[0]; ++a)
        for (std::size_t b = 0; b < ext[1]; ++b)
          for (std::size_t c = 0; c < ext[2]; ++c) {
            T v = u1(a, static_cast<std::size_t>(idx[0] - 1));
            if (d >= 2) v *= u1(b, static_cast<std::size_t>(idx[1] - 1));
            if (d >= 3) v *= u1(c, static_cast<std::size_t>(idx[2] - 1));
            u((a * ext[1] + b) * ext[2] + c, col) = v;
          }
    }
    out.eigenvectors = std::move(u);
  }
  return out;
}

/// max_ij |U_i^T M U_j - delta_ij|
template <std::floating_point T, typename MMat>
T orthonormality_defect(const Spectrum<T>& s, const MMat& m) {
  if (!s.eigenvectors) throw InvalidArgument("spectrum carries no eigenvectors");
  const auto& u = *s.eigenvectors;
  const std::size_t n = u.cols();
  const auto ut = u.transposed();
  T worst = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto mu = m.multiply(ut.row(j));
    for (std::size_t i = 0; i < n; ++i) {
      T dot = 0;
      const auto ui = ut.row(i);
      for (std::size_t r = 0; r < ut.cols(); ++r) dot += ui[r] * mu[r];
      worst = std::max(worst, std::abs(dot - (i == j ? T(1) : T(0))));
    }
  }
  return worst;
}

/// max_i ||K U_i - lambda_i M U_i||_2 / (||K||_max * ||U_i||_2)
template <std::floating_point T, typename KMat, typename MMat>
T relative_residual(const Spectrum<T>& s, const KMat& k, const MMat& m) {
  if (!s.eigenvectors) throw InvalidArgument("spectrum carries no eigenvectors");
  const auto ut = s.eigenvectors->transposed();
  const T knorm = std::max(k.max_abs(), std::numeric_limits<T>::min());
  T worst = 0;
  for (std::size_t j = 0; j < ut.rows(); ++j) {
    const auto u = ut.row(j);
    const auto ku = k.multiply(u);
    const auto mu = m.multiply(u);
    T r2 = 0, u2 = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const T r = ku[i] - s.eigenvalues[j] * mu[i];
      r2 += r * r;
      u2 += u[i] * u[i];
    }
    worst = std::max(worst, std::sqrt(r2) / (knorm * std::sqrt(u2)));
  }
  return worst;
}

}  // namespace igaspec
