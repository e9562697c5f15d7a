#pragma once

// Stiffness/mass assembly for -u'' + gamma u on a B-spline space, with an
// independent quadrature rule for the gradient term and for the L2 terms.

#include <cmath>
#include <concepts>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "igaspec/error.hpp"
#include "igaspec/matrix.hpp"
#include "igaspec/quadrature.hpp"
#include "igaspec/spectrum.hpp"
#include "igaspec/splines.hpp"

namespace igaspec {

enum class BoundaryCondition { dirichlet, neumann };

inline const char* to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::dirichlet ? "dirichlet" : "neumann";
}

/// Reaction coefficient gamma(x): either a constant or a pointwise function.
template <std::floating_point T>
class Coefficient {
 public:
  Coefficient() : Coefficient(T(0)) {}
  Coefficient(T value) : constant_(value), fn_([value](T) { return value; }) {}  // NOLINT

  static Coefficient constant(T value) { return Coefficient(value); }
  static Coefficient function(std::function<T(T)> fn) {
    Coefficient c;
    c.constant_.reset();
    c.fn_ = std::move(fn);
    return c;
  }

  T operator()(T x) const { return fn_(x); }
  bool is_constant() const noexcept { return constant_.has_value(); }
  std::optional<T> constant_value() const noexcept { return constant_; }

 private:
  std::optional<T> constant_;
  std::function<T(T)> fn_;
};

/// Rules for the three integrals of the discrete forms. The reaction and mass
/// terms always share one rule.
template <std::floating_point T>
struct QuadratureTriple {
  QuadratureRule<T> grad_rule;
  QuadratureRule<T> l2_rule;

  const QuadratureRule<T>& reaction_rule() const noexcept { return l2_rule; }
  const QuadratureRule<T>& mass_rule() const noexcept { return l2_rule; }

  static QuadratureTriple uniform(const QuadratureRule<T>& rule) { return {rule, rule}; }
};

template <std::floating_point T>
struct OperatorPair {
  SymBandMatrix<T> K;
  SymBandMatrix<T> M;
  BoundaryCondition bc = BoundaryCondition::neumann;
  /// Global basis index of row 0 (1 when the Dirichlet end functions were removed).
  int basis_offset = 0;

  std::size_t dimension() const noexcept { return K.size(); }
};

namespace detail {

template <std::floating_point T>
std::string describe_node(int element, T x) {
  std::ostringstream os;
  os.precision(17);
  os << "reaction coefficient is not finite at quadrature node x = " << static_cast<double>(x) << " (element "
     << element << ")";
  return os.str();
}

template <std::floating_point T>
void check_rule_domain(const QuadratureRule<T>& rule) {
  for (T x : rule.nodes)
    if (!(x >= T(-1) && x <= T(1))) throw InvalidArgument("quadrature nodes must lie in [-1, 1]");
}

}  // namespace detail

/// Assembles K (gradient + reaction) and M. Dirichlet conditions are imposed
/// by dropping the first and last basis functions, which are the only ones
/// nonzero at the clamped ends.
template <std::floating_point T>
OperatorPair<T> assemble_1d(const BasisSpec<T>& spec, const Coefficient<T>& gamma, const QuadratureTriple<T>& rules,
                            BoundaryCondition bc) {
  detail::check_rule_domain(rules.grad_rule);
  detail::check_rule_domain(rules.l2_rule);
  const int p = spec.degree();
  const int n_basis = spec.num_basis();
  const int offset = bc == BoundaryCondition::dirichlet ? 1 : 0;
  const int dim = n_basis - 2 * offset;
  if (dim < 1) throw InvalidArgument("mesh too coarse: no degrees of freedom remain after boundary conditions");

  OperatorPair<T> ops{SymBandMatrix<T>(static_cast<std::size_t>(dim), static_cast<std::size_t>(p)),
                      SymBandMatrix<T>(static_cast<std::size_t>(dim), static_cast<std::size_t>(p)), bc, offset};

  const auto elements = elements_of(spec, ReferenceElement<T>{T(-1), T(1)});
  const int local = p + 1;
  std::vector<T> ke(static_cast<std::size_t>(local * local));
  std::vector<T> me(static_cast<std::size_t>(local * local));

  const auto node_position = [](const Element<T>& el, T xi) {
    if (xi == T(-1)) return el.left;
    if (xi == T(1)) return el.right;
    return el.map(xi);
  };

  for (const auto& el : elements) {
    std::fill(ke.begin(), ke.end(), T(0));
    std::fill(me.begin(), me.end(), T(0));

    for (std::size_t q = 0; q < rules.grad_rule.size(); ++q) {
      const T x = node_position(el, rules.grad_rule.nodes[q]);
      const T w = rules.grad_rule.weights[q] * el.jacobian;
      const auto b = spec.evaluate_on_element(el.index, x);
      for (int a = 0; a < local; ++a)
        for (int c = 0; c <= a; ++c) ke[a * local + c] += w * b.derivs[a] * b.derivs[c];
    }
    for (std::size_t q = 0; q < rules.l2_rule.size(); ++q) {
      const T x = node_position(el, rules.l2_rule.nodes[q]);
      const T w = rules.l2_rule.weights[q] * el.jacobian;
      const T g = gamma(x);
      if (!std::isfinite(static_cast<long double>(g)))
        throw SingularCoefficientError(detail::describe_node(el.index, x), el.index, static_cast<double>(x));
      const auto b = spec.evaluate_on_element(el.index, x);
      for (int a = 0; a < local; ++a)
        for (int c = 0; c <= a; ++c) {
          const T vv = w * b.values[a] * b.values[c];
          me[a * local + c] += vv;
          ke[a * local + c] += g * vv;
        }
    }

    // Merge in fixed element order.
    for (int a = 0; a < local; ++a) {
      const int ga = el.index + a - offset;
      if (ga < 0 || ga >= dim) continue;
      for (int c = 0; c <= a; ++c) {
        const int gc = el.index + c - offset;
        if (gc < 0 || gc >= dim) continue;
        ops.K.add_lower(static_cast<std::size_t>(ga), static_cast<std::size_t>(gc), ke[a * local + c]);
        ops.M.add_lower(static_cast<std::size_t>(ga), static_cast<std::size_t>(gc), me[a * local + c]);
      }
    }
  }
  return ops;
}

/// Tensor-product operator on [a,b]^d built from identical 1D factors:
///   K_d = sum_i M x ... x K_i x ... x M,   M_d = M x ... x M.
/// The constant reaction is split evenly, gamma_1D = gamma / d.
template <std::floating_point T>
struct KroneckerOperator {
  std::vector<OperatorPair<T>> factors;
  T gamma_1d = 0;

  int dims() const noexcept { return static_cast<int>(factors.size()); }

  std::size_t dimension() const noexcept {
    std::size_t n = 1;
    for (const auto& f : factors) n *= f.dimension();
    return n;
  }

  struct Dense {
    DenseMatrix<T> K;
    DenseMatrix<T> M;
  };

  /// Explicit dense K and M; refuses problems above max_dof unknowns.
  Dense materialize(std::size_t max_dof = 20000) const {
    if (factors.empty()) throw InvalidArgument("Kronecker operator has no factors");
    if (dimension() > max_dof)
      throw InvalidArgument("refusing to materialize " + std::to_string(dimension()) +
                            " unknowns (cap " + std::to_string(max_dof) + ")");
    std::vector<DenseMatrix<T>> k1, m1;
    for (const auto& f : factors) {
      k1.push_back(f.K.to_dense());
      m1.push_back(f.M.to_dense());
    }
    Dense out;
    out.M = m1[0];
    for (std::size_t i = 1; i < factors.size(); ++i) out.M = kron(out.M, m1[i]);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      DenseMatrix<T> term = i == 0 ? k1[0] : m1[0];
      for (std::size_t j = 1; j < factors.size(); ++j) term = kron(term, j == i ? k1[j] : m1[j]);
      if (i == 0)
        out.K = std::move(term);
      else
        out.K += term;
    }
    return out;
  }
};

template <std::floating_point T>
KroneckerOperator<T> assemble_tensor(const BasisSpec<T>& spec, const Coefficient<T>& gamma_total, int dims,
                                     const QuadratureTriple<T>& rules, BoundaryCondition bc) {
  if (dims < 1 || dims > 3) throw InvalidArgument("tensor dimension must be 1, 2 or 3");
  if (!gamma_total.is_constant())
    throw InvalidArgument("the Kronecker split requires a constant reaction coefficient");
  const T g1 = *gamma_total.constant_value() / static_cast<T>(dims);
  auto factor = assemble_1d(spec, Coefficient<T>::constant(g1), rules, bc);
  KroneckerOperator<T> op;
  op.gamma_1d = g1;
  op.factors.assign(static_cast<std::size_t>(dims), factor);
  return op;
}

}  // namespace igaspec
