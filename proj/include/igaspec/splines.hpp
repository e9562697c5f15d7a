#pragma once

// Uniform maximum-continuity B-spline spaces on an interval.
//
// A space of degree p on n uniform elements uses the clamped knot vector
//   {a,...,a, a+h, ..., b-h, b,...,b}   (end knots repeated p+1 times)
// and has N = n + p basis functions, each C^{p-1} across breakpoints.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "igaspec/error.hpp"

namespace igaspec {

/// Largest degree with fixed-size evaluation scratch space.
inline constexpr int kMaxDegree = 15;

template <std::floating_point T>
class KnotVector {
 public:
  /// Validates an explicit knot vector: clamped ends, simple and uniformly
  /// spaced interior knots.
  KnotVector(std::vector<T> knots, int degree) : knots_(std::move(knots)), degree_(degree) {
    validate();
  }

  static KnotVector uniform_open(T a, T b, int n_elements, int degree) {
    if (degree < 1 || degree > kMaxDegree)
      throw InvalidArgument("degree must lie in [1, " + std::to_string(kMaxDegree) + "], got " +
                            std::to_string(degree));
    if (n_elements < 1)
      throw InvalidArgument("n_elements must be >= 1, got " + std::to_string(n_elements));
    if (!(b > a)) throw InvalidArgument("interval must satisfy b > a");
    std::vector<T> knots;
    knots.reserve(static_cast<std::size_t>(n_elements + 2 * degree + 1));
    knots.insert(knots.end(), static_cast<std::size_t>(degree), a);
    const T h = (b - a) / static_cast<T>(n_elements);
    for (int i = 0; i <= n_elements; ++i)
      knots.push_back(i == n_elements ? b : a + static_cast<T>(i) * h);
    knots.insert(knots.end(), static_cast<std::size_t>(degree), b);
    return KnotVector(std::move(knots), degree);
  }

  int degree() const noexcept { return degree_; }
  std::span<const T> knots() const noexcept { return knots_; }
  T knot(int i) const { return knots_[static_cast<std::size_t>(i)]; }
  T lower() const noexcept { return knots_.front(); }
  T upper() const noexcept { return knots_.back(); }
  int num_elements() const noexcept { return n_elements_; }
  T element_size() const noexcept { return (upper() - lower()) / static_cast<T>(n_elements_); }
  /// i-th distinct breakpoint, i in [0, num_elements].
  T breakpoint(int i) const { return knot(degree_ + i); }

  friend bool operator==(const KnotVector&, const KnotVector&) = default;

 private:
  void validate() {
    const int p = degree_;
    if (p < 1 || p > kMaxDegree)
      throw InvalidArgument("degree must lie in [1, " + std::to_string(kMaxDegree) + "]");
    const auto m = static_cast<int>(knots_.size());
    if (m < 2 * (p + 1)) throw InvalidArgument("knot vector too short for degree");
    if (!std::is_sorted(knots_.begin(), knots_.end()))
      throw InvalidArgument("knots must be nondecreasing");
    for (int i = 1; i <= p; ++i) {
      if (knot(i) != knot(0) || knot(m - 1 - i) != knot(m - 1))
        throw InvalidArgument("end knots must be repeated exactly p+1 times");
    }
    n_elements_ = m - 2 * p - 1;
    if (!(knot(m - 1) > knot(0))) throw InvalidArgument("knot vector spans an empty interval");
    const T h = (knot(m - 1) - knot(0)) / static_cast<T>(n_elements_);
    const T tol = T(1e-10) * h;
    for (int e = 0; e < n_elements_; ++e) {
      const T width = knot(p + e + 1) - knot(p + e);
      if (!(width > 0)) throw InvalidArgument("interior knots must be simple (multiplicity 1)");
      if (std::abs(width - h) > tol)
        throw InvalidArgument("only uniformly spaced interior knots are supported");
    }
  }

  std::vector<T> knots_;
  int degree_;
  int n_elements_ = 0;
};

template <std::floating_point T>
KnotVector<T> make_uniform_open_knots(T a, T b, int n_elements, int degree) {
  return KnotVector<T>::uniform_open(a, b, n_elements, degree);
}

template <std::floating_point T>
struct BasisValue {
  int index;
  T value;
};

/// Affine image of the reference element; a point xhat maps to left + jacobian*(xhat - ref_lower).
template <std::floating_point T>
struct Element {
  int index;
  T left;
  T right;
  T jacobian;
  T reference_lower;

  T map(T xhat) const { return left + jacobian * (xhat - reference_lower); }
};

template <std::floating_point T>
struct ReferenceElement {
  T lower = 0;
  T upper = 1;
  T length() const { return upper - lower; }
};

/// Basis values and first derivatives of the p+1 functions supported on one element.
template <std::floating_point T>
struct LocalBasis {
  int first_index = 0;  ///< global index of values[0]
  int count = 0;        ///< p + 1
  std::array<T, kMaxDegree + 1> values{};
  std::array<T, kMaxDegree + 1> derivs{};
};

template <std::floating_point T>
class BasisSpec {
 public:
  explicit BasisSpec(KnotVector<T> knot_vector) : kv_(std::move(knot_vector)) {}

  const KnotVector<T>& knot_vector() const noexcept { return kv_; }
  int degree() const noexcept { return kv_.degree(); }
  int num_basis() const noexcept { return static_cast<int>(kv_.knots().size()) - kv_.degree() - 1; }
  int num_elements() const noexcept { return kv_.num_elements(); }
  T lower() const noexcept { return kv_.lower(); }
  T upper() const noexcept { return kv_.upper(); }

  /// Element containing x under the half-open convention [x_e, x_{e+1}),
  /// with the last element closed at the right end.
  int element_of(T x) const {
    if (!(x >= lower() && x <= upper()))
      throw InvalidArgument("evaluation point outside the spline interval");
    const int n = num_elements();
    int e = static_cast<int>(std::floor((x - lower()) / kv_.element_size()));
    e = std::clamp(e, 0, n - 1);
    while (e > 0 && x < kv_.breakpoint(e)) --e;
    while (e < n - 1 && x >= kv_.breakpoint(e + 1)) ++e;
    return e;
  }

  /// Evaluates the polynomial pieces living on element e at x. x is not
  /// required to lie inside the element, which lets quadrature nodes on the
  /// element boundary use the element's own piece.
  LocalBasis<T> evaluate_on_element(int e, T x) const {
    const int p = degree();
    const int span = e + p;
    LocalBasis<T> out;
    out.first_index = e;
    out.count = p + 1;

    // Triangular Cox-de Boor table; row d holds the d+1 nonzero degree-d values.
    std::array<T, kMaxDegree + 1> left{}, right{};
    std::array<T, kMaxDegree + 1> lower_deg{};  // degree p-1 values
    std::array<T, kMaxDegree + 1> n{};
    n[0] = 1;
    for (int d = 1; d <= p; ++d) {
      if (d == p) std::copy_n(n.begin(), p, lower_deg.begin());
      left[d] = x - kv_.knot(span + 1 - d);
      right[d] = kv_.knot(span + d) - x;
      T saved = 0;
      for (int r = 0; r < d; ++r) {
        const T denom = right[r + 1] + left[d - r];
        const T temp = denom != 0 ? n[r] / denom : T(0);  // 0/0 := 0
        n[r] = saved + right[r + 1] * temp;
        saved = left[d - r] * temp;
      }
      n[d] = saved;
    }
    std::copy_n(n.begin(), p + 1, out.values.begin());

    // d/dx phi_g = p * (phi_{g,p-1} / (t_{g+p} - t_g) - phi_{g+1,p-1} / (t_{g+p+1} - t_{g+1}))
    for (int r = 0; r <= p; ++r) {
      const int g = span - p + r;
      T d = 0;
      if (r >= 1) {
        const T denom = kv_.knot(g + p) - kv_.knot(g);
        if (denom != 0) d += lower_deg[r - 1] / denom;
      }
      if (r <= p - 1) {
        const T denom = kv_.knot(g + p + 1) - kv_.knot(g + 1);
        if (denom != 0) d -= lower_deg[r] / denom;
      }
      out.derivs[r] = static_cast<T>(p) * d;
    }
    return out;
  }

  LocalBasis<T> evaluate(T x) const { return evaluate_on_element(element_of(x), x); }

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;

 private:
  KnotVector<T> kv_;
};

/// Values of the basis functions whose support contains x, as (index, value).
template <std::floating_point T>
std::vector<BasisValue<T>> eval_basis(const BasisSpec<T>& spec, T x) {
  const auto local = spec.evaluate(x);
  std::vector<BasisValue<T>> out(static_cast<std::size_t>(local.count));
  for (int r = 0; r < local.count; ++r) out[r] = {local.first_index + r, local.values[r]};
  return out;
}

template <std::floating_point T>
std::vector<BasisValue<T>> eval_basis_deriv(const BasisSpec<T>& spec, T x) {
  const auto local = spec.evaluate(x);
  std::vector<BasisValue<T>> out(static_cast<std::size_t>(local.count));
  for (int r = 0; r < local.count; ++r) out[r] = {local.first_index + r, local.derivs[r]};
  return out;
}

template <std::floating_point T>
std::vector<Element<T>> elements_of(const BasisSpec<T>& spec, ReferenceElement<T> ref = {}) {
  const auto& kv = spec.knot_vector();
  std::vector<Element<T>> out;
  out.reserve(static_cast<std::size_t>(kv.num_elements()));
  for (int e = 0; e < kv.num_elements(); ++e) {
    const T l = kv.breakpoint(e);
    const T r = kv.breakpoint(e + 1);
    out.push_back({e, l, r, (r - l) / ref.length(), ref.lower});
  }
  return out;
}

/// Direct recursive Cox-de Boor evaluation of a single basis function
/// phi_j^p on an arbitrary knot sequence. Exponential cost; intended for
/// small degrees and as an independent reference for the table evaluator.
/// The right end of the knot sequence is treated as closed.
template <std::floating_point T>
T cox_de_boor(std::span<const T> knots, int j, int p, T x) {
  const auto k = [&](int i) { return knots[static_cast<std::size_t>(i)]; };
  if (p == 0) {
    if (k(j) <= x && x < k(j + 1)) return 1;
    const bool last_span = k(j) < k(j + 1) && k(j + 1) == knots.back();
    return (last_span && x == knots.back()) ? T(1) : T(0);
  }
  T value = 0;
  const T d1 = k(j + p) - k(j);
  if (d1 != 0) value += (x - k(j)) / d1 * cox_de_boor(knots, j, p - 1, x);
  const T d2 = k(j + p + 1) - k(j + 1);
  if (d2 != 0) value += (k(j + p + 1) - x) / d2 * cox_de_boor(knots, j + 1, p - 1, x);
  return value;
}

}  // namespace igaspec
