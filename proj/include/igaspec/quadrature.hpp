#pragma once

// Gauss-Legendre / Gauss-Lobatto rules on [-1, 1] and their affine blends.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "igaspec/error.hpp"

namespace igaspec {

enum class RuleFamily { gauss, lobatto, blended, custom };

template <std::floating_point T>
struct QuadratureRule {
  std::vector<T> nodes;    ///< ascending, in [-1, 1]
  std::vector<T> weights;  ///< may be negative for blended rules
  int exactness_degree = 0;
  RuleFamily family = RuleFamily::custom;
  std::string name;

  std::size_t size() const noexcept { return nodes.size(); }

  T weight_sum() const {
    T s = 0;
    for (T w : weights) s += w;
    return s;
  }

  /// Converts the stored nodes and weights; regenerate with the factories
  /// when full precision in the target type matters.
  template <std::floating_point U>
  QuadratureRule<U> cast() const {
    QuadratureRule<U> r;
    r.nodes.assign(nodes.begin(), nodes.end());
    r.weights.assign(weights.begin(), weights.end());
    r.exactness_degree = exactness_degree;
    r.family = family;
    r.name = name;
    return r;
  }
};

/// tau * rule_a + (1 - tau) * rule_b, stored both as its parts and as the merged
/// node set so that assembly needs a single code path.
template <std::floating_point T>
struct BlendedRule {
  QuadratureRule<T> rule_a;
  QuadratureRule<T> rule_b;
  T tau = 1;
  QuadratureRule<T> merged;

  const QuadratureRule<T>& rule() const noexcept { return merged; }
  operator const QuadratureRule<T>&() const noexcept { return merged; }  // NOLINT
};

namespace detail {

/// P_n(x) and P_n'(x) by the three-term recurrence.
template <std::floating_point T>
std::pair<T, T> legendre_with_derivative(int n, T x) {
  if (n == 0) return {T(1), T(0)};
  T p_prev = 1;
  T p = x;
  for (int k = 1; k < n; ++k) {
    const T next = (static_cast<T>(2 * k + 1) * x * p - static_cast<T>(k) * p_prev) / static_cast<T>(k + 1);
    p_prev = p;
    p = next;
  }
  // (x^2 - 1) P_n' = n (x P_n - P_{n-1}); only used away from x = +-1.
  const T dp = static_cast<T>(n) * (x * p - p_prev) / (x * x - T(1));
  return {p, dp};
}

template <std::floating_point T>
T legendre(int n, T x) {
  if (n == 0) return 1;
  T p_prev = 1;
  T p = x;
  for (int k = 1; k < n; ++k) {
    const T next = (static_cast<T>(2 * k + 1) * x * p - static_cast<T>(k) * p_prev) / static_cast<T>(k + 1);
    p_prev = p;
    p = next;
  }
  return p;
}

template <std::floating_point T>
T newton_tolerance() {
  return std::max(T(4) * std::numeric_limits<T>::epsilon(), T(1e-30));
}

/// Polishes x toward a root of f using Newton steps x -= f/f'.
template <std::floating_point T, typename Step>
T newton_polish(T x, Step step) {
  const T tol = newton_tolerance<T>();
  for (int it = 0; it < 100; ++it) {
    const T dx = step(x);
    x -= dx;
    if (std::abs(dx) <= tol) {
      x -= step(x);
      break;
    }
  }
  return x;
}

template <std::floating_point T>
void mirror_symmetric(std::vector<T>& nodes, std::vector<T>& weights) {
  const std::size_t m = nodes.size();
  for (std::size_t i = 0; i < m / 2; ++i) {
    const std::size_t j = m - 1 - i;
    const T x = (nodes[j] - nodes[i]) / 2;
    const T w = (weights[i] + weights[j]) / 2;
    nodes[i] = -x;
    nodes[j] = x;
    weights[i] = weights[j] = w;
  }
  if (m % 2 == 1) nodes[m / 2] = 0;
}

inline std::string format_tau(double tau) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", tau);
  return buf;
}

}  // namespace detail

/// m-point Gauss-Legendre rule, exact for degree 2m - 1.
template <std::floating_point T>
QuadratureRule<T> gauss_legendre(int m) {
  if (m < 1) throw InvalidArgument("Gauss-Legendre rule needs m >= 1, got " + std::to_string(m));
  QuadratureRule<T> r;
  r.family = RuleFamily::gauss;
  r.exactness_degree = 2 * m - 1;
  r.name = "G" + std::to_string(m);
  r.nodes.resize(static_cast<std::size_t>(m));
  r.weights.resize(static_cast<std::size_t>(m));
  const T pi = std::numbers::pi_v<T>;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like guess for the i-th largest root.
    T x = std::cos(pi * (static_cast<T>(i) + T(0.75)) / (static_cast<T>(m) + T(0.5)));
    x = detail::newton_polish(x, [m](T z) {
      const auto [p, dp] = detail::legendre_with_derivative(m, z);
      return p / dp;
    });
    const auto [p, dp] = detail::legendre_with_derivative(m, x);
    (void)p;
    const auto k = static_cast<std::size_t>(m - 1 - i);
    r.nodes[k] = x;
    r.weights[k] = T(2) / ((T(1) - x * x) * dp * dp);
  }
  detail::mirror_symmetric(r.nodes, r.weights);
  return r;
}

/// m-point Gauss-Lobatto rule (endpoints included), exact for degree 2m - 3.
template <std::floating_point T>
QuadratureRule<T> gauss_lobatto(int m) {
  if (m < 2) throw InvalidArgument("Gauss-Lobatto rule needs m >= 2, got " + std::to_string(m));
  QuadratureRule<T> r;
  r.family = RuleFamily::lobatto;
  r.exactness_degree = 2 * m - 3;
  r.name = "L" + std::to_string(m);
  r.nodes.resize(static_cast<std::size_t>(m));
  r.weights.resize(static_cast<std::size_t>(m));
  const int n = m - 1;
  const T pi = std::numbers::pi_v<T>;
  r.nodes.front() = -1;
  r.nodes.back() = 1;
  // Interior nodes are the roots of P_n'; P_n'' follows from Legendre's equation.
  for (int i = 1; i < n; ++i) {
    T x = std::cos(pi * static_cast<T>(i) / static_cast<T>(n));
    x = detail::newton_polish(x, [n](T z) {
      const auto [p, dp] = detail::legendre_with_derivative(n, z);
      const T d2p = (T(2) * z * dp - static_cast<T>(n * (n + 1)) * p) / (T(1) - z * z);
      return dp / d2p;
    });
    r.nodes[static_cast<std::size_t>(n - i)] = x;
  }
  const T scale = T(2) / static_cast<T>(m * n);
  for (std::size_t k = 0; k < r.nodes.size(); ++k) {
    const T p = detail::legendre(n, r.nodes[k]);
    r.weights[k] = scale / (p * p);
  }
  detail::mirror_symmetric(r.nodes, r.weights);
  return r;
}

/// tau * rule_a + (1 - tau) * rule_b. tau is unconstrained; coincident nodes
/// are merged so the result is a plain weighted node list.
template <std::floating_point T>
BlendedRule<T> blend(const QuadratureRule<T>& rule_a, const QuadratureRule<T>& rule_b, T tau) {
  BlendedRule<T> out{rule_a, rule_b, tau, {}};
  std::vector<std::pair<T, T>> pts;
  pts.reserve(rule_a.size() + rule_b.size());
  for (std::size_t i = 0; i < rule_a.size(); ++i) pts.emplace_back(rule_a.nodes[i], tau * rule_a.weights[i]);
  for (std::size_t i = 0; i < rule_b.size(); ++i)
    pts.emplace_back(rule_b.nodes[i], (T(1) - tau) * rule_b.weights[i]);
  std::stable_sort(pts.begin(), pts.end(), [](const auto& l, const auto& r) { return l.first < r.first; });

  auto& merged = out.merged;
  const T tol = 16 * std::numeric_limits<T>::epsilon();
  for (const auto& [x, w] : pts) {
    if (!merged.nodes.empty() && std::abs(x - merged.nodes.back()) <= tol) {
      merged.weights.back() += w;
    } else {
      merged.nodes.push_back(x);
      merged.weights.push_back(w);
    }
  }
  merged.family = RuleFamily::blended;
  merged.exactness_degree = std::min(rule_a.exactness_degree, rule_b.exactness_degree);
  merged.name = "blend(" + rule_a.name + "," + rule_b.name + "," +
                detail::format_tau(static_cast<double>(tau)) + ")";
  return out;
}

/// Affinely maps the rule from [-1, 1] onto [c, d] and sums.
template <std::floating_point T, typename F>
T integrate(const QuadratureRule<T>& rule, F&& f, T c, T d) {
  if (!(d > c)) throw InvalidArgument("integrate: interval must satisfy c < d");
  const T half = (d - c) / 2;
  const T mid = (d + c) / 2;
  T sum = 0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

template <std::floating_point T, typename F>
T integrate(const BlendedRule<T>& rule, F&& f, T c, T d) {
  return integrate(rule.merged, std::forward<F>(f), c, d);
}

/// Ordered pair of rules whose blending parameter follows the reference
/// convention for each degree:
///   p = 1: tau G2 + (1 - tau) L2
///   p = 2: tau L3 + (1 - tau) G3      (tau weights Lobatto)
///   p = 3: tau G4 + (1 - tau) L4      (tau weights Gauss)
/// Higher degrees default to tau G_{p+1} + (1 - tau) L_{p+1}.
template <std::floating_point T>
std::pair<QuadratureRule<T>, QuadratureRule<T>> lobatto_gauss_pair(int p) {
  if (p < 1) throw InvalidArgument("degree must be >= 1");
  if (p == 2) return {gauss_lobatto<T>(3), gauss_legendre<T>(3)};
  return {gauss_legendre<T>(p + 1), gauss_lobatto<T>(p + 1)};
}

/// tau G_{p+1} + (1 - tau) G_p, used where Lobatto end nodes are unusable.
template <std::floating_point T>
std::pair<QuadratureRule<T>, QuadratureRule<T>> gauss_gauss_pair(int p) {
  if (p < 1) throw InvalidArgument("degree must be >= 1");
  return {gauss_legendre<T>(p + 1), gauss_legendre<T>(p)};
}

/// Optimal parameter for the linear case; the tau sweep on the Neumann
/// Laplacian reproduces it (see tests).
inline constexpr double kLinearOptimalTau = 0.5;

template <std::floating_point T>
T optimal_tau(int p, std::optional<T> linear_tau = std::nullopt) {
  switch (p) {
    case 1: return linear_tau.value_or(static_cast<T>(kLinearOptimalTau));
    case 2: return T(2) / T(3);
    case 3: return T(-3) / T(2);
    default:
      throw NoBuiltinOptimum("no built-in optimal blending for degree " + std::to_string(p) +
                             "; call blend() with an explicit tau");
  }
}

/// O_p: the dispersion-optimal Gauss/Lobatto blend for p in {1, 2, 3}.
template <std::floating_point T>
BlendedRule<T> optimal_blend(int p, std::optional<T> linear_tau = std::nullopt) {
  const T tau = optimal_tau<T>(p, linear_tau);
  auto [a, b] = lobatto_gauss_pair<T>(p);
  return blend(a, b, tau);
}

}  // namespace igaspec
