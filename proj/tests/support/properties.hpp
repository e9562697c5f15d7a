#pragma once

// Property suites shared by the unit tests and the acceptance binary. Each
// suite returns the worst observed defect against its tolerance.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "igaspec/assembly.hpp"
#include "igaspec/eigen.hpp"
#include "igaspec/quadrature.hpp"
#include "igaspec/spectrum.hpp"
#include "igaspec/splines.hpp"
#include "support/oracles.hpp"

namespace igaspec::testing {

struct PropertyResult {
  std::string name;
  bool pass = true;
  long double worst = 0;
  long double tolerance = 0;
  std::string note;
};

inline void track(PropertyResult& r, long double defect, const std::string& where = {}) {
  if (!(defect <= r.tolerance)) {
    if (r.pass) r.note = where;
    r.pass = false;
  }
  if (std::isnan(defect) || defect > r.worst) r.worst = defect;
}

/// G_m integrates x^k exactly for k <= 2m-1 and misses x^{2m}; L_m likewise
/// for 2m-3 and 2m-2.
inline PropertyResult quadrature_exactness() {
  using T = long double;
  PropertyResult r{"quadrature exactness, m = 2..10", true, 0, 1e-15L, {}};
  for (int m = 2; m <= 10; ++m) {
    for (const bool lobatto : {false, true}) {
      const auto rule = lobatto ? gauss_lobatto<T>(m) : gauss_legendre<T>(m);
      const int exact = lobatto ? 2 * m - 3 : 2 * m - 1;
      const auto err = [&](int k) {
        T s = 0;
        for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * std::pow(rule.nodes[q], k);
        return std::abs(s - monomial_integral<T>(k));
      };
      for (int k = 0; k <= exact; ++k)
        track(r, err(k), rule.name + " x^" + std::to_string(k));
      // The first even monomial past the exactness degree must be missed.
      const int miss = exact + 1 + (exact + 1) % 2;
      if (err(miss) < 1e-6L) track(r, 1, rule.name + " integrates x^" + std::to_string(miss));
      if (rule.exactness_degree != exact) track(r, 1, rule.name + " reports the wrong exactness degree");
    }
  }
  return r;
}

inline PropertyResult partition_of_unity() {
  using T = long double;
  PropertyResult r{"partition of unity and nonnegativity", true, 0, 1e-15L, {}};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int p = 1; p <= 6; ++p)
    for (int n : {1, 3, 8}) {
      const BasisSpec<T> spec(KnotVector<T>::uniform_open(T(-1), T(2), n, p));
      for (int s = 0; s < 50; ++s) {
        const T x = s == 0 ? T(-1) : s == 1 ? T(2) : T(-1) + 3 * static_cast<T>(u(rng));
        const auto b = spec.evaluate(x);
        T sum = 0, dsum = 0;
        for (int a = 0; a < b.count; ++a) {
          sum += b.values[a];
          dsum += b.derivs[a];
          if (b.values[a] < -1e-18L) track(r, -b.values[a], "negative basis value");
        }
        track(r, std::abs(sum - 1), "sum of values, p=" + std::to_string(p));
        track(r, std::abs(dsum) / (p * n), "sum of derivatives, p=" + std::to_string(p));
      }
    }
  return r;
}

/// Basis derivatives against central differences of the basis values, and
/// basis values against the plain Cox-de Boor recursion.
inline PropertyResult derivative_finite_difference() {
  using T = long double;
  PropertyResult r{"derivatives vs finite differences", true, 0, 1e-8L, {}};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (int p = 1; p <= 5; ++p)
    for (int n : {2, 5}) {
      const BasisSpec<T> spec(KnotVector<T>::uniform_open(T(0), T(1), n, p));
      const T h = T(1) / n;
      for (int s = 0; s < 40; ++s) {
        const int e = s % n;
        // Stay away from breakpoints, where the difference quotient straddles pieces.
        const T x = (e + T(0.05) + T(0.9) * static_cast<T>(u(rng))) * h;
        const auto b = spec.evaluate_on_element(e, x);
        for (int a = 0; a < b.count; ++a) {
          const auto value = [&](T y) { return spec.evaluate_on_element(e, y).values[a]; };
          const T fd = central_difference<T>(value, x, T(1e-6) * h);
          const T scale = std::max<T>(1, std::abs(b.derivs[a]));
          track(r, std::abs(fd - b.derivs[a]) / scale, "p=" + std::to_string(p));
          const T cdb = cox_de_boor<T>(spec.knot_vector().knots(), b.first_index + a, p, x);
          track(r, std::abs(cdb - b.values[a]), "Cox-de Boor value, p=" + std::to_string(p));
        }
      }
    }
  return r;
}

/// M is positive definite for exact rules, K is SPD under Dirichlet and
/// semidefinite with a one-dimensional kernel under Neumann.
inline PropertyResult definiteness() {
  using T = long double;
  PropertyResult r{"SPD / semidefiniteness", true, 0, 1e-12L, {}};
  for (int p = 1; p <= 4; ++p)
    for (int n : {4, 9}) {
      const BasisSpec<T> spec(KnotVector<T>::uniform_open(T(0), T(1), n, p));
      const auto rules = QuadratureTriple<T>::uniform(gauss_legendre<T>(p + 1));
      const auto dir = assemble_1d(spec, Coefficient<T>::constant(0), rules, BoundaryCondition::dirichlet);
      const auto neu = assemble_1d(spec, Coefficient<T>::constant(0), rules, BoundaryCondition::neumann);
      const std::string where = "p=" + std::to_string(p) + " n=" + std::to_string(n);
      try {
        (void)cholesky(neu.M);
        (void)cholesky(dir.K);
      } catch (const NotPositiveDefiniteError&) {
        track(r, 1, "Cholesky failed, " + where);
      }
      const auto ke = symmetric_eigen(neu.K.to_dense(), false).values;
      const T scale = neu.K.max_abs();
      track(r, std::max<T>(0, -ke.front()) / scale, "negative eigenvalue of Neumann K, " + where);
      track(r, std::abs(ke.front()) / scale, "Neumann K kernel, " + where);
      if (ke[1] / scale < 1e-6L) track(r, 1, "Neumann K kernel larger than constants, " + where);
      // Symmetric entries are stored once; check K u = 0 for constants.
      const std::vector<T> ones(neu.K.size(), T(1));
      for (T v : neu.K.multiply(ones)) track(r, std::abs(v) / scale, "K 1 != 0, " + where);
    }
  return r;
}

/// Every solve returns M-orthonormal eigenvectors with small residuals.
inline PropertyResult solve_quality() {
  using T = long double;
  PropertyResult r{"M-orthonormality and residuals", true, 0, 1e-10L, {}};
  for (int p = 1; p <= 4; ++p)
    for (int n : {3, 10, 40})
      for (const auto bc : {BoundaryCondition::neumann, BoundaryCondition::dirichlet})
        for (const bool blended : {false, true}) {
          const BasisSpec<T> spec(KnotVector<T>::uniform_open(T(0), T(1), n, p));
          const auto rule = blended && p <= 3 ? optimal_blend<T>(p).merged : gauss_legendre<T>(p + 1);
          const auto gamma = Coefficient<T>::function([](T x) { return 1 + x * x; });
          const auto ops = assemble_1d(spec, gamma, QuadratureTriple<T>::uniform(rule), bc);
          for (const bool refine : {false, true}) {
            const auto s = solve_generalized(ops, SolveOptions{true, refine});
            const std::string where = "p=" + std::to_string(p) + " n=" + std::to_string(n);
            track(r, orthonormality_defect(s, ops.M), "orthonormality, " + where);
            track(r, relative_residual(s, ops.K, ops.M), "residual, " + where);
          }
        }
  return r;
}

/// Matrices assembled with tau A + (1 - tau) B equal the same blend of the
/// matrices assembled with A and B.
inline PropertyResult blending_linearity() {
  using T = long double;
  PropertyResult r{"blending linearity", true, 0, 1e-15L, {}};
  for (int p = 1; p <= 3; ++p)
    for (T tau : {T(-1.5), T(0.3), T(2) / 3, T(2.5)}) {
      const BasisSpec<T> spec(KnotVector<T>::uniform_open(T(0), T(2), 6, p));
      const auto gamma = Coefficient<T>::function([](T x) { return std::exp(x); });
      const auto a = gauss_legendre<T>(p + 1);
      const auto b = gauss_lobatto<T>(p + 2);
      const auto bc = BoundaryCondition::neumann;
      const auto oa = assemble_1d(spec, gamma, QuadratureTriple<T>::uniform(a), bc);
      const auto ob = assemble_1d(spec, gamma, QuadratureTriple<T>::uniform(b), bc);
      const auto ot = assemble_1d(spec, gamma, QuadratureTriple<T>::uniform(blend(a, b, tau).merged), bc);
      const T scale = std::max(oa.K.max_abs(), ob.K.max_abs());
      for (std::size_t i = 0; i < ot.dimension(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
          track(r, std::abs(ot.K(i, j) - (tau * oa.K(i, j) + (1 - tau) * ob.K(i, j))) / scale, "K");
          track(r, std::abs(ot.M(i, j) - (tau * oa.M(i, j) + (1 - tau) * ob.M(i, j))) / scale, "M");
        }
      // The merged rule integrates like the blend of its parents.
      const auto f = [](T x) { return std::cos(3 * x) + x * x * x; };
      const T lhs = integrate(blend(a, b, tau), f, T(-0.5), T(1.5));
      const T rhs = tau * integrate(a, f, T(-0.5), T(1.5)) + (1 - tau) * integrate(b, f, T(-0.5), T(1.5));
      track(r, std::abs(lhs - rhs), "integrate");
    }
  return r;
}

/// Assembling with a constant gamma shifts the spectrum by gamma.
inline PropertyResult constant_shift() {
  using T = long double;
  PropertyResult r{"constant-gamma shift equivalence", true, 0, 1e-10L, {}};
  for (int p = 1; p <= 3; ++p)
    for (const auto bc : {BoundaryCondition::neumann, BoundaryCondition::dirichlet})
      for (const bool blended : {false, true})
        for (T gamma : {T(0.5), T(7), T(120)}) {
          const BasisSpec<T> spec(KnotVector<T>::uniform_open(T(0), T(1), 12, p));
          const auto rule = blended ? optimal_blend<T>(p).merged : gauss_legendre<T>(p + 1);
          const auto q = QuadratureTriple<T>::uniform(rule);
          const SolveOptions opts{false, true};
          const auto base = solve_generalized(assemble_1d(spec, Coefficient<T>::constant(0), q, bc), opts);
          const auto with = solve_generalized(assemble_1d(spec, Coefficient<T>::constant(gamma), q, bc), opts);
          const auto shifted = shift_spectrum(base, gamma);
          for (std::size_t j = 0; j < with.size(); ++j)
            track(r, std::abs(with.eigenvalues[j] - shifted.eigenvalues[j]) / std::max<T>(1, std::abs(with.eigenvalues[j])),
                  "p=" + std::to_string(p));
        }
  return r;
}

inline std::vector<PropertyResult> all_property_suites() {
  return {quadrature_exactness(), partition_of_unity(), derivative_finite_difference(), definiteness(),
          solve_quality(),        blending_linearity(), constant_shift()};
}

}  // namespace igaspec::testing
