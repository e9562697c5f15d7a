#include "igaspec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

namespace igaspec {

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;

/// Jacobi polynomial P_n^{(a,b)}(x) by the three-term recurrence.
Real jacobi(int n, Real a, Real b, Real x) {
  if (n == 0) return 1;
  Real p0 = 1;
  Real p1 = (a + 1) + (a + b + 2) * (x - 1) / 2;
  for (int k = 2; k <= n; ++k) {
    const Real s = 2 * k + a + b;
    const Real c1 = 2 * k * (k + a + b) * (s - 2);
    const Real c2 = (s - 1) * (s * (s - 2) * x + a * a - b * b);
    const Real c3 = 2 * (k + a - 1) * (k + b - 1) * s;
    const Real p2 = (c2 * p1 - c3 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// Unnormalized bound state j (0-based) of the alpha = beta = 1 well.
Real poschl_teller_raw(int j, Real x) {
  const Real s = std::sin(x);
  const Real c = std::cos(x);
  return s * s * c * c * jacobi(j, Real(1.5), Real(1.5), std::cos(2 * x));
}

Real poschl_teller_norm(int j) {
  static std::mutex mu;
  static std::map<int, Real> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(j); it != cache.end()) return it->second;
  const auto rule = gauss_legendre<Real>(24);
  const int pieces = 64 + 8 * j;
  const Real width = kPi / 2 / pieces;
  Real sum = 0;
  for (int e = 0; e < pieces; ++e)
    sum += integrate(rule, [j](Real x) { const Real u = poschl_teller_raw(j, x); return u * u; }, e * width,
                     (e + 1) * width);
  const Real norm = std::sqrt(sum);
  cache.emplace(j, norm);
  return norm;
}

Real poschl_teller_gamma(Real x) {
  if (!(x > 0 && x < kPi / 2)) return std::numeric_limits<Real>::infinity();
  const Real c = std::cos(x);
  const Real s = std::sin(x);
  return 2 / (c * c) + 2 / (s * s);
}

std::vector<Real> exact_3d(int count) {
  for (int bound = 2;; bound *= 2) {
    std::vector<int> sums;
    sums.reserve(static_cast<std::size_t>(bound) * bound * bound);
    for (int k = 1; k <= bound; ++k)
      for (int l = 1; l <= bound; ++l)
        for (int m = 1; m <= bound; ++m) sums.push_back(k * k + l * l + m * m);
    std::sort(sums.begin(), sums.end());
    // Any triple outside the box has a sum of at least (bound+1)^2 + 2.
    const int limit = (bound + 1) * (bound + 1) + 2;
    if (static_cast<int>(sums.size()) >= count && sums[static_cast<std::size_t>(count - 1)] < limit) {
      std::vector<Real> out(static_cast<std::size_t>(count));
      for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = sums[static_cast<std::size_t>(i)] * kPi * kPi;
      return out;
    }
  }
}

std::string format_real(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10Lg", v);
  return buf;
}

}  // namespace

Real ModelProblem::exact_eigenvalue(int j) const {
  if (j < 1) throw InvalidArgument("mode indices are 1-based");
  switch (kind) {
    case ProblemKind::laplace_dirichlet_1d:
    case ProblemKind::laplace_neumann_1d:
      return static_cast<Real>(j) * j * kPi * kPi;
    case ProblemKind::laplace_dirichlet_3d:
      return exact_3d(j).back();
    case ProblemKind::schrodinger_poschl_teller: {
      const Real v = 4 + 2 * static_cast<Real>(j - 1);
      return v * v;
    }
  }
  throw InvalidArgument("unknown problem kind");
}

Real ModelProblem::exact_eigenfunction(int j, Real x) const {
  if (j < 1) throw InvalidArgument("mode indices are 1-based");
  const Real r2 = std::sqrt(Real(2));
  switch (kind) {
    case ProblemKind::laplace_dirichlet_1d:
      return r2 * std::sin(j * kPi * x);
    case ProblemKind::laplace_neumann_1d:
      return r2 * std::cos(j * kPi * x);
    case ProblemKind::schrodinger_poschl_teller:
      return poschl_teller_raw(j - 1, x) / poschl_teller_norm(j - 1);
    case ProblemKind::laplace_dirichlet_3d:
      break;
  }
  throw InvalidArgument("closed-form eigenfunctions are provided for 1D problems only");
}

int ModelProblem::multiplicity(int j) const {
  if (j < 1) throw InvalidArgument("mode indices are 1-based");
  if (dims == 1) return 1;
  for (int extra = 16;; extra *= 2) {
    const auto values = exact_3d(j + extra);
    if (values.back() == values[static_cast<std::size_t>(j - 1)]) continue;
    return static_cast<int>(std::count(values.begin(), values.end(), values[static_cast<std::size_t>(j - 1)]));
  }
}

const std::vector<std::string>& model_problem_names() {
  static const std::vector<std::string> names{"laplace_dirichlet_1d", "laplace_neumann_1d", "laplace_dirichlet_3d",
                                              "schrodinger_poschl_teller"};
  return names;
}

ModelProblem model_problem(const std::string& name) {
  ModelProblem p;
  p.name = name;
  if (name == "laplace_dirichlet_1d") {
    p.kind = ProblemKind::laplace_dirichlet_1d;
    p.bc = BoundaryCondition::dirichlet;
    p.gamma_description = "0";
  } else if (name == "laplace_neumann_1d") {
    p.kind = ProblemKind::laplace_neumann_1d;
    p.bc = BoundaryCondition::neumann;
    p.gamma_description = "0";
  } else if (name == "laplace_dirichlet_3d") {
    p.kind = ProblemKind::laplace_dirichlet_3d;
    p.bc = BoundaryCondition::dirichlet;
    p.dims = 3;
    p.gamma_description = "0";
  } else if (name == "schrodinger_poschl_teller") {
    p.kind = ProblemKind::schrodinger_poschl_teller;
    p.bc = BoundaryCondition::dirichlet;
    p.upper = kPi / 2;
    p.gamma = Coefficient<Real>::function(poschl_teller_gamma);
    p.gamma_description = "2/cos^2(x) + 2/sin^2(x)";
  } else {
    std::string known;
    for (const auto& n : model_problem_names()) known += (known.empty() ? "" : ", ") + n;
    throw InvalidArgument("unknown problem '" + name + "' (known: " + known + ")");
  }
  return p;
}

std::vector<Real> exact_spectrum(const ModelProblem& problem, int count) {
  if (count < 1) throw InvalidArgument("count must be >= 1");
  if (problem.kind == ProblemKind::laplace_dirichlet_3d) return exact_3d(count);
  std::vector<Real> out(static_cast<std::size_t>(count));
  for (int j = 1; j <= count; ++j) out[static_cast<std::size_t>(j - 1)] = problem.exact_eigenvalue(j);
  return out;
}

RuleSpec RuleSpec::single(const std::string& rule) {
  (void)named_rule<double>(rule);
  return {rule, {}, 1, rule};
}

RuleSpec RuleSpec::blended(const std::string& a, const std::string& b, Real tau, std::string label) {
  (void)named_rule<double>(a);
  (void)named_rule<double>(b);
  RuleSpec r{a, b, tau, std::move(label)};
  if (r.label.empty()) r.label = r.canonical();
  return r;
}

RuleSpec RuleSpec::degree_pair(int p, Real tau, std::string label) {
  const auto [a, b] = lobatto_gauss_pair<double>(p);
  return blended(a.name, b.name, tau, std::move(label));
}

RuleSpec RuleSpec::gauss_gauss(int p, Real tau, std::string label) {
  const auto [a, b] = gauss_gauss_pair<double>(p);
  return blended(a.name, b.name, tau, std::move(label));
}

RuleSpec RuleSpec::optimal(int p) { return degree_pair(p, optimal_tau<Real>(p), "optimal"); }

std::string RuleSpec::canonical() const {
  if (!is_blend()) return rule_a;
  return "blend(" + rule_a + "," + rule_b + "," + format_real(tau) + ")";
}

BasisSpec<Real> problem_space(const ModelProblem& problem, int p, int n_elements) {
  return BasisSpec<Real>(make_uniform_open_knots<Real>(problem.lower, problem.upper, n_elements, p));
}

Spectrum<Real> discrete_spectrum(const ModelProblem& problem, int p, int n_elements, const RuleSpec& rule,
                                 bool eigenvectors) {
  const auto spec = problem_space(problem, p, n_elements);
  const auto rules = QuadratureTriple<Real>::uniform(rule.build<Real>());
  if (problem.dims == 1) {
    const auto ops = assemble_1d(spec, problem.gamma, rules, problem.bc);
    return solve_generalized(ops, SolveOptions{eigenvectors, true});
  }
  if (eigenvectors) throw InvalidArgument("eigenvectors are not produced for tensor spectra");
  const auto op = assemble_tensor(spec, problem.gamma, problem.dims, rules, problem.bc);
  return solve_tensor(op, SolveOptions{false, true});
}

int comparable_modes(const ModelProblem& problem, const Spectrum<Real>& discrete) {
  const int n = static_cast<int>(discrete.size());
  return problem.has_zero_mode() ? std::max(0, n - 1) : n;
}

std::vector<Real> relative_errors(const Spectrum<Real>& discrete, const ModelProblem& problem,
                                  const std::vector<int>& modes) {
  if (modes.empty()) return {};
  const int available = comparable_modes(problem, discrete);
  int top = 0;
  for (int m : modes) {
    if (m < 1) throw InvalidArgument("mode indices are 1-based, got " + std::to_string(m));
    if (m > available)
      throw InvalidArgument("mode " + std::to_string(m) + " exceeds the " + std::to_string(available) +
                            " available discrete modes");
    top = std::max(top, m);
  }
  const auto exact = exact_spectrum(problem, top);
  const int offset = problem.has_zero_mode() ? 1 : 0;
  std::vector<Real> out;
  out.reserve(modes.size());
  for (int m : modes) {
    const Real lam = exact[static_cast<std::size_t>(m - 1)];
    out.push_back((discrete.eigenvalues[static_cast<std::size_t>(m - 1 + offset)] - lam) / lam);
  }
  return out;
}

ConvergenceReport fit_convergence(const std::vector<std::pair<Real, Real>>& errors_by_mesh) {
  ConvergenceReport rep;
  std::vector<Real> lx, ly;
  for (const auto& [h, e] : errors_by_mesh) {
    if (!(h > 0)) throw InvalidArgument("mesh sizes must be positive");
    const Real a = std::abs(e);
    if (!(a > 0) || !std::isfinite(a)) {
      rep.warnings.push_back("excluded mesh h=" + format_real(h) + ": error is zero or not finite");
      continue;
    }
    rep.mesh_sizes.push_back(h);
    rep.relative_errors.push_back(a);
    lx.push_back(std::log(h));
    ly.push_back(std::log(a));
  }
  if (!rep.mesh_sizes.empty()) {
    const auto [lo, hi] = std::minmax_element(rep.mesh_sizes.begin(), rep.mesh_sizes.end());
    rep.h_min = *lo;
    rep.h_max = *hi;
  }
  const std::size_t n = lx.size();
  if (n < 2) {
    rep.warnings.push_back("slope omitted: fewer than two usable meshes");
    return rep;
  }
  for (std::size_t i = 1; i < n; ++i)
    rep.pairwise_slopes.push_back((ly[i] - ly[i - 1]) / (lx[i] - lx[i - 1]));
  const Real mx = std::accumulate(lx.begin(), lx.end(), Real(0)) / n;
  const Real my = std::accumulate(ly.begin(), ly.end(), Real(0)) / n;
  Real sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0)) {
    rep.warnings.push_back("slope omitted: all meshes have the same size");
    return rep;
  }
  rep.fitted_slope = sxy / sxx;
  rep.leading_coefficient = std::exp(my - *rep.fitted_slope * mx);
  return rep;
}

std::vector<int> default_dispersion_meshes(int p) {
  if (p == 3) return {16, 32};
  return {32, 64};
}

DispersionEstimate dispersion_coefficient(const ModelProblem& problem, int p, const RuleSpec& rule, int power,
                                          std::vector<int> meshes) {
  if (power < 1) throw InvalidArgument("power must be >= 1");
  if (meshes.empty()) meshes = default_dispersion_meshes(p);
  std::sort(meshes.begin(), meshes.end());
  if (meshes.size() < 2) throw InvalidArgument("dispersion estimates need at least two meshes");
  DispersionEstimate out;
  out.power = power;
  out.meshes = meshes;
  out.rule = rule.label.empty() ? rule.canonical() : rule.label;
  const Real lam = problem.exact_eigenvalue(1);
  const Real omega = std::sqrt(lam);
  for (int n : meshes) {
    const auto s = discrete_spectrum(problem, p, n, rule);
    const Real err = relative_errors(s, problem, {1}).front();
    const Real big_lambda = omega * (problem.upper - problem.lower) / n;
    out.relative_errors.push_back(err);
    out.raw_coefficients.push_back(err / std::pow(big_lambda, static_cast<Real>(power)));
  }
  // Next term in the expansion is Lambda^{power+2}.
  const auto& c = out.raw_coefficients;
  const std::size_t f = c.size() - 1;
  const Real ratio = std::pow(static_cast<Real>(meshes[f]) / meshes[f - 1], Real(2));
  out.coefficient = (ratio * c[f] - c[f - 1]) / (ratio - 1);
  for (std::size_t i = 1; i < c.size(); ++i)
    if (std::abs(c[i] - c[i - 1]) > Real(0.2) * std::abs(out.coefficient)) out.converged = false;
  return out;
}

TauSweepReport tau_sweep(int p, const std::vector<Real>& tau_grid, BlendPair pair, std::vector<int> meshes,
                         const std::string& problem_name) {
  if (tau_grid.size() < 2) throw InvalidArgument("tau sweep needs at least two grid points");
  TauSweepReport rep;
  rep.p = p;
  rep.power = 2 * p;
  rep.pair = pair;
  rep.problem = problem_name;
  const auto problem = model_problem(problem_name);
  if (problem.dims != 1) throw InvalidArgument("tau sweep needs a 1D problem");
  for (Real tau : tau_grid) {
    const auto rule = pair == BlendPair::gauss_lobatto ? RuleSpec::degree_pair(p, tau) : RuleSpec::gauss_gauss(p, tau);
    rep.taus.push_back(tau);
    rep.coefficients.push_back(dispersion_coefficient(problem, p, rule, rep.power, meshes).coefficient);
  }
  for (std::size_t i = 0; i + 1 < rep.taus.size(); ++i) {
    const Real c0 = rep.coefficients[i];
    const Real c1 = rep.coefficients[i + 1];
    if (c0 == 0) {
      rep.tau_star = rep.taus[i];
      rep.bracket = {rep.taus[i], rep.taus[i]};
      return rep;
    }
    if ((c0 < 0) != (c1 < 0) || c1 == 0) {
      const Real t0 = rep.taus[i];
      const Real t1 = rep.taus[i + 1];
      rep.tau_star = t0 - c0 * (t1 - t0) / (c1 - c0);
      rep.bracket = {t0, t1};
      return rep;
    }
  }
  throw NumericalError("tau sweep: the leading coefficient does not change sign on the grid [" +
                       format_real(tau_grid.front()) + ", " + format_real(tau_grid.back()) + "]");
}

Real eigenfunction_l2_error(const Spectrum<Real>& discrete, const ModelProblem& problem, int mode,
                            const BasisSpec<Real>& spec) {
  if (problem.dims != 1) {
    if (problem.multiplicity(mode) > 1)
      throw MultiplicityError("mode " + std::to_string(mode) + " is degenerate; subspace comparison is not supported");
    throw InvalidArgument("eigenfunction errors are implemented for 1D problems only");
  }
  if (!discrete.eigenvectors) throw InvalidArgument("spectrum carries no eigenvectors");
  if (mode < 1 || mode > comparable_modes(problem, discrete))
    throw InvalidArgument("mode " + std::to_string(mode) + " out of range");
  const int offset = problem.bc == BoundaryCondition::dirichlet ? 1 : 0;
  const auto& u = *discrete.eigenvectors;
  if (static_cast<int>(u.rows()) != spec.num_basis() - 2 * offset)
    throw InvalidArgument("eigenvector length does not match the spline space");
  const std::size_t col = static_cast<std::size_t>(mode - 1 + (problem.has_zero_mode() ? 1 : 0));

  const auto rule = gauss_legendre<Real>(spec.degree() + 3);
  const auto elements = elements_of(spec, ReferenceElement<Real>{-1, 1});
  const auto uh = [&](const Element<Real>& el, Real x) {
    const auto b = spec.evaluate_on_element(el.index, x);
    Real v = 0;
    for (int r = 0; r < b.count; ++r) {
      const int g = b.first_index + r - offset;
      if (g >= 0 && g < static_cast<int>(u.rows())) v += u(static_cast<std::size_t>(g), col) * b.values[r];
    }
    return v;
  };

  Real inner = 0;
  for (const auto& el : elements)
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Real x = el.map(rule.nodes[q]);
      inner += rule.weights[q] * el.jacobian * uh(el, x) * problem.exact_eigenfunction(mode, x);
    }
  const Real sign = inner < 0 ? -1 : 1;
  Real err2 = 0;
  for (const auto& el : elements)
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Real x = el.map(rule.nodes[q]);
      const Real d = sign * uh(el, x) - problem.exact_eigenfunction(mode, x);
      err2 += rule.weights[q] * el.jacobian * d * d;
    }
  return std::sqrt(err2);
}

int schrodinger_elements(int table_n) {
  if (table_n < 2 || table_n % 2 != 0)
    throw InvalidArgument("Schrodinger table sizes must be even and >= 2, got " + std::to_string(table_n));
  return table_n / 2;
}

int elements_for_dofs(const ModelProblem& problem, int p, int dofs) {
  const int n = problem.bc == BoundaryCondition::dirichlet ? dofs - p + 2 : dofs - p;
  if (n < 1)
    throw InvalidArgument(std::to_string(dofs) + " degrees of freedom are too few for degree " + std::to_string(p));
  return n;
}

}  // namespace igaspec
