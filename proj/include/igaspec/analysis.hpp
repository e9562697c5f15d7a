#pragma once

// Model problems with known spectra, eigenvalue-error metrics, convergence
// fits, dispersion-coefficient estimation and the tau sweep.
//
// Everything here runs in long double: several quantities of interest
// (sixth-order dispersion coefficients, low-mode errors at N = 1000) sit
// below double-precision round-off.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "igaspec/assembly.hpp"
#include "igaspec/eigen.hpp"
#include "igaspec/quadrature.hpp"
#include "igaspec/spectrum.hpp"
#include "igaspec/splines.hpp"

namespace igaspec {

using Real = long double;

enum class ProblemKind { laplace_dirichlet_1d, laplace_neumann_1d, laplace_dirichlet_3d, schrodinger_poschl_teller };

struct ModelProblem {
  ProblemKind kind = ProblemKind::laplace_neumann_1d;
  std::string name;
  Real lower = 0;
  Real upper = 1;
  int dims = 1;
  BoundaryCondition bc = BoundaryCondition::neumann;
  Coefficient<Real> gamma;
  std::string gamma_description;

  /// j-th exact eigenvalue, 1-based, ascending with multiplicity. The Neumann
  /// zero mode is not counted.
  Real exact_eigenvalue(int j) const;
  /// L2-normalized exact eigenfunction of mode j (1D problems only).
  Real exact_eigenfunction(int j, Real x) const;
  /// Number of exact modes sharing the eigenvalue of mode j.
  int multiplicity(int j) const;
  /// True when the discrete spectrum carries an extra zero mode ahead of mode 1.
  bool has_zero_mode() const noexcept { return kind == ProblemKind::laplace_neumann_1d; }
};

ModelProblem model_problem(const std::string& name);
const std::vector<std::string>& model_problem_names();

/// First `count` exact eigenvalues, ascending with multiplicity.
std::vector<Real> exact_spectrum(const ModelProblem& problem, int count);

/// Precision-independent description of a quadrature choice.
struct RuleSpec {
  std::string rule_a;  ///< "G3", "L4", ...
  std::string rule_b;  ///< empty for a single rule
  Real tau = 1;
  std::string label;  ///< name used in reports

  bool is_blend() const noexcept { return !rule_b.empty(); }

  static RuleSpec single(const std::string& rule);
  static RuleSpec blended(const std::string& a, const std::string& b, Real tau, std::string label = {});
  /// tau-blend of the degree's Gauss/Lobatto pair (see lobatto_gauss_pair).
  static RuleSpec degree_pair(int p, Real tau, std::string label = {});
  /// tau G_{p+1} + (1 - tau) G_p.
  static RuleSpec gauss_gauss(int p, Real tau, std::string label = {});
  static RuleSpec gauss(int p) { return single("G" + std::to_string(p + 1)); }
  static RuleSpec lobatto(int p) { return single("L" + std::to_string(p + 1)); }
  static RuleSpec optimal(int p);

  template <std::floating_point T>
  QuadratureRule<T> build() const;

  /// Canonical textual form, e.g. "G3" or "blend(L3,G3,0.6666666666666666667)".
  std::string canonical() const;
};

/// Parses "G3"/"L4" into a rule of the requested precision.
template <std::floating_point T>
QuadratureRule<T> named_rule(const std::string& name) {
  if (name.size() < 2 || (name[0] != 'G' && name[0] != 'L'))
    throw InvalidArgument("unknown quadrature rule '" + name + "' (expected G<m> or L<m>)");
  std::size_t used = 0;
  int m = 0;
  try {
    m = std::stoi(name.substr(1), &used);
  } catch (const std::exception&) {
    throw InvalidArgument("unknown quadrature rule '" + name + "'");
  }
  if (used != name.size() - 1) throw InvalidArgument("unknown quadrature rule '" + name + "'");
  return name[0] == 'G' ? gauss_legendre<T>(m) : gauss_lobatto<T>(m);
}

template <std::floating_point T>
QuadratureRule<T> RuleSpec::build() const {
  if (!is_blend()) return named_rule<T>(rule_a);
  auto r = blend(named_rule<T>(rule_a), named_rule<T>(rule_b), static_cast<T>(tau)).merged;
  if (!label.empty()) r.name = label;
  return r;
}

/// Spline space of degree p with n uniform elements on the problem's interval.
BasisSpec<Real> problem_space(const ModelProblem& problem, int p, int n_elements);

/// Assembles and solves the discrete problem. 3D problems go through the
/// Kronecker route; eigenvectors are only available in 1D.
Spectrum<Real> discrete_spectrum(const ModelProblem& problem, int p, int n_elements, const RuleSpec& rule,
                                 bool eigenvectors = false);

/// Number of discrete modes comparable with exact ones (zero mode excluded).
int comparable_modes(const ModelProblem& problem, const Spectrum<Real>& discrete);

/// Signed relative errors (lambda_h - lambda) / lambda for 1-based modes.
std::vector<Real> relative_errors(const Spectrum<Real>& discrete, const ModelProblem& problem,
                                  const std::vector<int>& modes);

struct ConvergenceReport {
  std::vector<Real> mesh_sizes;
  std::vector<Real> relative_errors;  ///< absolute values, as fitted
  std::optional<Real> fitted_slope;   ///< least squares over all usable meshes
  std::vector<Real> pairwise_slopes;  ///< between consecutive usable meshes
  Real h_min = 0;
  Real h_max = 0;
  std::optional<Real> leading_coefficient;
  std::vector<std::string> warnings;
};

/// Least-squares slope of log|error| against log h. Exact hits are dropped
/// with a warning; fewer than two usable points leave the slope empty.
ConvergenceReport fit_convergence(const std::vector<std::pair<Real, Real>>& errors_by_mesh);

struct DispersionEstimate {
  int power = 0;
  Real coefficient = 0;                 ///< Richardson-extrapolated
  std::vector<int> meshes;              ///< element counts
  std::vector<Real> raw_coefficients;   ///< error / Lambda^power per mesh
  std::vector<Real> relative_errors;    ///< signed, lowest mode
  bool converged = true;
  std::string rule;
};

/// Default mesh pair (n, 2n) for the Lambda expansion at degree p.
std::vector<int> default_dispersion_meshes(int p);

/// Estimates c in (lambda_h - lambda)/lambda ~ c Lambda^power for the lowest
/// nonzero mode, Lambda = sqrt(lambda) h.
DispersionEstimate dispersion_coefficient(const ModelProblem& problem, int p, const RuleSpec& rule, int power,
                                          std::vector<int> meshes = {});

enum class BlendPair { gauss_lobatto, gauss_gauss };

struct TauSweepReport {
  int p = 0;
  int power = 0;
  std::string problem;
  BlendPair pair = BlendPair::gauss_lobatto;
  std::vector<Real> taus;
  std::vector<Real> coefficients;
  Real tau_star = 0;
  std::array<Real, 2> bracket{};
};

/// Locates the tau cancelling the Lambda^{2p} coefficient by linear
/// interpolation across the first sign change. The default problem is the
/// Dirichlet Laplacian: with clamped Neumann ends the cubic coefficient picks
/// up an O(h) boundary term that biases the two-mesh extrapolation.
TauSweepReport tau_sweep(int p, const std::vector<Real>& tau_grid, BlendPair pair = BlendPair::gauss_lobatto,
                         std::vector<int> meshes = {}, const std::string& problem = "laplace_dirichlet_1d");

/// ||u_h - u||_{L2} for a 1D mode, with u_h sign-aligned to u.
Real eigenfunction_l2_error(const Spectrum<Real>& discrete, const ModelProblem& problem, int mode,
                            const BasisSpec<Real>& spec);

/// Schrodinger table sizes N map onto N / 2 uniform elements on (0, pi/2).
int schrodinger_elements(int table_n);

/// DOF count N to element count for a 1D problem.
int elements_for_dofs(const ModelProblem& problem, int p, int dofs);

}  // namespace igaspec
