#include <doctest.h>

#include <cmath>

#include "igaspec/assembly.hpp"
#include "igaspec/eigen.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace igaspec;
using T = long double;

namespace {

BasisSpec<T> space(int n, int p, T a = 0, T b = 1) { return BasisSpec<T>(make_uniform_open_knots<T>(a, b, n, p)); }

OperatorPair<T> assemble(int n, int p, const Coefficient<T>& gamma, const QuadratureRule<T>& rule,
                         BoundaryCondition bc) {
  return assemble_1d(space(n, p), gamma, QuadratureTriple<T>::uniform(rule), bc);
}

}  // namespace

TEST_CASE("linear stencils") {
  const T h = 0.25L;
  const auto ops = assemble(4, 1, Coefficient<T>::constant(0), gauss_legendre<T>(2), BoundaryCondition::dirichlet);
  REQUIRE(ops.dimension() == 3);
  CHECK(ops.basis_offset == 1);
  CHECK(std::abs(ops.K(1, 0) + 1 / h) < 1e-15L);
  CHECK(std::abs(ops.K(1, 1) - 2 / h) < 1e-15L);
  CHECK(std::abs(ops.K(2, 1) + 1 / h) < 1e-15L);
  CHECK(std::abs(ops.M(1, 0) - h / 6) < 1e-18L);
  CHECK(std::abs(ops.M(1, 1) - 2 * h / 3) < 1e-18L);

  const auto lumped = assemble(4, 1, Coefficient<T>::constant(0), gauss_lobatto<T>(2), BoundaryCondition::dirichlet);
  CHECK(std::abs(lumped.M(1, 0)) < 1e-18L);
  CHECK(std::abs(lumped.M(1, 1) - h) < 1e-18L);
}

TEST_CASE("constant reaction adds the mass matrix") {
  const auto g2 = gauss_legendre<T>(2);
  const auto k0 = assemble(6, 1, Coefficient<T>::constant(0), g2, BoundaryCondition::neumann);
  const auto k1 = assemble(6, 1, Coefficient<T>::constant(1), g2, BoundaryCondition::neumann);
  for (std::size_t i = 0; i < k0.dimension(); ++i)
    for (std::size_t j = 0; j < k0.dimension(); ++j) CHECK(std::abs(k1.K(i, j) - k0.K(i, j) - k0.M(i, j)) < 1e-13L);
}

TEST_CASE("mass matrix integrates products exactly") {
  // sum_ij M_ij = |interval|, and 1^T K 1 = integral of gamma for Neumann.
  for (int p = 1; p <= 5; ++p) {
    const auto gamma = Coefficient<T>::function([](T x) { return x * x; });
    const auto ops = assemble_1d(space(7, p, T(0), T(3)), gamma, QuadratureTriple<T>::uniform(gauss_legendre<T>(p + 2)),
                                 BoundaryCondition::neumann);
    const std::vector<T> ones(ops.dimension(), T(1));
    CHECK(std::abs(ops.M.bilinear(ones, ones) - 3) < 1e-15L);
    CHECK(std::abs(ops.K.bilinear(ones, ones) - 9) < 1e-14L);
  }
}

TEST_CASE("Dirichlet drops the end functions") {
  const auto n = assemble(5, 3, Coefficient<T>::constant(0), gauss_legendre<T>(4), BoundaryCondition::neumann);
  const auto d = assemble(5, 3, Coefficient<T>::constant(0), gauss_legendre<T>(4), BoundaryCondition::dirichlet);
  CHECK(n.dimension() == 8);
  CHECK(d.dimension() == 6);
  for (std::size_t i = 0; i < d.dimension(); ++i)
    for (std::size_t j = 0; j < d.dimension(); ++j) CHECK(d.K(i, j) == n.K(i + 1, j + 1));
}

TEST_CASE("singular reaction at a Lobatto node is reported") {
  const auto gamma = Coefficient<T>::function([](T x) { return x <= 0 ? std::numeric_limits<T>::infinity() : 1 / x; });
  CHECK_THROWS_AS(assemble(4, 2, gamma, gauss_lobatto<T>(3), BoundaryCondition::dirichlet), SingularCoefficientError);
  CHECK_NOTHROW(assemble(4, 2, gamma, gauss_legendre<T>(3), BoundaryCondition::dirichlet));
  try {
    assemble(4, 2, gamma, gauss_lobatto<T>(3), BoundaryCondition::dirichlet);
  } catch (const SingularCoefficientError& e) {
    CHECK(e.element() == 0);
    CHECK(e.node() == 0.0);
  }
}

TEST_CASE("too coarse Dirichlet mesh") {
  CHECK_THROWS_AS(assemble(1, 1, Coefficient<T>::constant(0), gauss_legendre<T>(2), BoundaryCondition::dirichlet),
                  InvalidArgument);
}

TEST_CASE("tensor operators") {
  const auto g3 = gauss_legendre<T>(3);
  const auto rules = QuadratureTriple<T>::uniform(g3);
  const auto op2 = assemble_tensor(space(3, 2), Coefficient<T>::constant(2), 2, rules, BoundaryCondition::neumann);
  CHECK(op2.gamma_1d == 1);
  const auto one = assemble(3, 2, Coefficient<T>::constant(1), g3, BoundaryCondition::neumann);
  const auto dense = op2.materialize();
  const auto m1 = one.M.to_dense();
  const auto mm = kron(m1, m1);
  for (std::size_t i = 0; i < mm.rows(); ++i)
    for (std::size_t j = 0; j < mm.cols(); ++j) CHECK(dense.M(i, j) == mm(i, j));

  CHECK_THROWS_AS(assemble_tensor(space(3, 2), Coefficient<T>::function([](T x) { return x; }), 2, rules,
                                  BoundaryCondition::neumann),
                  InvalidArgument);
  CHECK_THROWS_AS(assemble_tensor(space(3, 2), Coefficient<T>::constant(0), 4, rules, BoundaryCondition::neumann),
                  InvalidArgument);
  CHECK_THROWS_AS(op2.materialize(10), InvalidArgument);
}

TEST_CASE("3D Kronecker operator equals direct assembly (p=1, 3 elements, Dirichlet)") {
  const auto g2 = gauss_legendre<T>(2);
  const auto op = assemble_tensor(space(3, 1), Coefficient<T>::constant(0), 3, QuadratureTriple<T>::uniform(g2),
                                  BoundaryCondition::dirichlet);
  const auto dense = op.materialize();
  REQUIRE(dense.K.rows() == 8);
  const auto direct = testing::assemble_direct_3d<T>(1, 3, T(0), g2, g2, BoundaryCondition::dirichlet);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      CHECK(std::abs(dense.K(i, j) - direct.K(i, j)) < 1e-12L);
      CHECK(std::abs(dense.M(i, j) - direct.M(i, j)) < 1e-12L);
    }
}

TEST_CASE("shift_spectrum") {
  Spectrum<T> s;
  const T pi2 = std::acos(T(-1)) * std::acos(T(-1));
  s.eigenvalues = {pi2, 4 * pi2};
  CHECK(shift_spectrum(s, T(0)).eigenvalues == s.eigenvalues);
  CHECK(shift_spectrum(s, T(5)).eigenvalues[0] == pi2 + 5);
}

TEST_CASE("property: definiteness") {
  const auto r = testing::definiteness();
  INFO(r.note);
  CHECK(r.pass);
}

TEST_CASE("property: blending linearity") {
  const auto r = testing::blending_linearity();
  INFO(r.note);
  CHECK(r.pass);
}

TEST_CASE("property: constant shift equivalence") {
  const auto r = testing::constant_shift();
  INFO(r.note);
  CHECK(r.pass);
}
