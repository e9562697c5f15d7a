#include "igaspec/checks.hpp"

#include <array>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>

#include "igaspec/analysis.hpp"
#include "igaspec/experiments.hpp"

namespace igaspec {

namespace {

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

/// Records one sub-assertion and folds it into the overall verdict.
void expect(CheckResult& r, bool ok, const std::string& what) {
  r.details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  r.pass = r.pass && ok;
}

void expect_runtime(CheckResult& r, const Timer& t, double limit) {
  r.seconds = t.seconds();
  expect(r, r.seconds < limit, fmt("runtime %.2f s < %.0f s", r.seconds, limit));
}

bool within_rel(Real value, Real target, Real tol) { return std::abs(value - target) <= tol * std::abs(target); }

/// Signed relative errors per mode (outer) and mesh (inner).
std::vector<std::vector<Real>> error_table(const ModelProblem& problem, int p, const RuleSpec& rule,
                                           const std::vector<int>& meshes, const std::vector<int>& modes) {
  std::vector<std::vector<Real>> out(modes.size());
  for (int n : meshes) {
    const auto errs = relative_errors(discrete_spectrum(problem, p, n, rule), problem, modes);
    for (std::size_t i = 0; i < modes.size(); ++i) out[i].push_back(errs[i]);
  }
  return out;
}

Real slope_of(const std::vector<Real>& h, const std::vector<Real>& errors) {
  std::vector<std::pair<Real, Real>> pts;
  for (std::size_t i = 0; i < h.size(); ++i) pts.emplace_back(h[i], errors[i]);
  const auto rep = fit_convergence(pts);
  return rep.fitted_slope.value_or(std::numeric_limits<Real>::quiet_NaN());
}

CheckResult convergence_check(int criterion, const std::string& name, const std::string& problem_name,
                              const std::vector<int>& meshes, const std::vector<int>& modes, Real tol_gauss,
                              Real tol_optimal, bool require_smaller, double limit) {
  Timer t;
  CheckResult r{criterion, name, true, 0, {}};
  const auto problem = model_problem(problem_name);
  std::vector<Real> h;
  for (int n : meshes) h.push_back((problem.upper - problem.lower) / n);
  const auto g = error_table(problem, 2, RuleSpec::gauss(2), meshes, modes);
  const auto o = error_table(problem, 2, RuleSpec::optimal(2), meshes, modes);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const Real sg = slope_of(h, g[i]);
    const Real so = slope_of(h, o[i]);
    expect(r, std::abs(sg - 4) <= tol_gauss, fmt("mode %d: G3 slope %.3Lf (4 +- %.2Lf)", modes[i], sg, tol_gauss));
    expect(r, std::abs(so - 6) <= tol_optimal,
           fmt("mode %d: optimal slope %.3Lf (6 +- %.2Lf)", modes[i], so, tol_optimal));
    if (require_smaller) {
      bool smaller = true;
      for (std::size_t k = 0; k < meshes.size(); ++k) smaller = smaller && std::abs(o[i][k]) < std::abs(g[i][k]);
      expect(r, smaller, fmt("mode %d: optimal error below G3 error on every mesh", modes[i]));
    }
  }
  expect_runtime(r, t, limit);
  return r;
}

struct TableEntry {
  int p;
  int n;
  std::array<double, 3> gauss;
  std::array<double, 3> optimal;
};

// Reference Schrodinger error table, modes {1, 2, 4}.
const std::vector<TableEntry>& schrodinger_table() {
  static const std::vector<TableEntry> t{
      {1, 40, {3.19e-3, 1.06e-2, 3.95e-2}, {6.60e-4, 1.65e-3, 3.81e-3}},
      {1, 80, {7.41e-4, 2.49e-3, 9.33e-3}, {8.43e-5, 2.19e-4, 5.97e-4}},
      {1, 160, {1.78e-4, 6.04e-4, 2.27e-3}, {1.06e-5, 2.80e-5, 8.07e-5}},
      {2, 10, {1.63e-3, 1.68e-2, 1.02e+0}, {2.65e-4, 4.29e-3, 2.73e-1}},
      {2, 20, {7.94e-5, 6.68e-4, 9.07e-3}, {2.39e-6, 6.54e-5, 1.95e-3}},
      {2, 40, {4.62e-6, 3.61e-5, 4.07e-4}, {1.11e-7, 5.24e-7, 2.83e-5}},
  };
  return t;
}

const std::map<int, std::array<double, 3>>& schrodinger_gauss_rho() {
  static const std::map<int, std::array<double, 3>> rho{{1, {2.08, 2.07, 2.06}}, {2, {4.23, 4.43, 5.64}}};
  return rho;
}

const std::vector<int> kSchrodingerModes{1, 2, 4};

/// |relative error| per table row for one rule.
std::vector<std::array<Real, 3>> schrodinger_errors(int p, const RuleSpec& rule) {
  const auto problem = model_problem("schrodinger_poschl_teller");
  std::vector<std::array<Real, 3>> out;
  for (const auto& row : schrodinger_table()) {
    if (row.p != p) continue;
    const auto e = relative_errors(discrete_spectrum(problem, p, schrodinger_elements(row.n), rule), problem,
                                   kSchrodingerModes);
    out.push_back({std::abs(e[0]), std::abs(e[1]), std::abs(e[2])});
  }
  return out;
}

std::vector<Real> schrodinger_h(int p) {
  std::vector<Real> h;
  for (const auto& row : schrodinger_table())
    if (row.p == p) h.push_back(Real(1) / row.n);
  return h;
}

}  // namespace

CheckResult check_dispersion_coefficients() {
  Timer t;
  CheckResult r{1, "dispersion coefficients (p=2, Neumann, n=32/64)", true, 0, {}};
  const auto problem = model_problem("laplace_neumann_1d");
  const auto c4 = [&](const RuleSpec& rule) { return dispersion_coefficient(problem, 2, rule, 4).coefficient; };

  const Real g = c4(RuleSpec::single("G3"));
  expect(r, within_rel(g, Real(1) / 720, Real(0.05)), fmt("G3: %.6Le vs 1/720 = %.6Le", g, Real(1) / 720));
  const Real l = c4(RuleSpec::single("L3"));
  expect(r, within_rel(l, Real(-1) / 1440, Real(0.05)), fmt("L3: %.6Le vs -1/1440 = %.6Le", l, Real(-1) / 1440));
  for (Real tau : {Real(0.2), Real(0.5), Real(0.9)}) {
    const Real c = c4(RuleSpec::degree_pair(2, tau));
    const Real target = (2 - 3 * tau) / 1440;
    expect(r, within_rel(c, target, Real(0.05)), fmt("tau=%.1Lf: %.6Le vs (2-3tau)/1440 = %.6Le", tau, c, target));
  }
  const auto opt = RuleSpec::optimal(2);
  const Real o4 = c4(opt);
  expect(r, std::abs(o4) < Real(1) / 14400, fmt("tau=2/3: |Lambda^4 coefficient| %.3Le < 1/14400", std::abs(o4)));
  const Real o6 = dispersion_coefficient(problem, 2, opt, 6).coefficient;
  expect(r, within_rel(o6, Real(11) / 60480, Real(0.10)),
         fmt("tau=2/3: Lambda^6 coefficient %.6Le vs 11/60480 = %.6Le", o6, Real(11) / 60480));
  expect_runtime(r, t, 10);
  return r;
}

CheckResult check_tau_recovery() {
  Timer t;
  CheckResult r{2, "optimal tau recovery", true, 0, {}};
  const auto s2 = tau_sweep(2, {0, Real(0.25), Real(0.5), Real(0.75), 1});
  expect(r, s2.tau_star >= Real(0.665) && s2.tau_star <= Real(0.668),
         fmt("p=2: tau* = %.6Lf in [0.665, 0.668]", s2.tau_star));
  const auto s3 = tau_sweep(3, {-3, -2, -1, 0});
  expect(r, s3.tau_star >= Real(-1.52) && s3.tau_star <= Real(-1.48),
         fmt("p=3: tau* = %.6Lf in [-1.52, -1.48]", s3.tau_star));
  expect_runtime(r, t, 30);
  return r;
}

CheckResult check_convergence_1d() {
  return convergence_check(3, "1D convergence (p=2, Neumann, modes 2/4/8)", "laplace_neumann_1d", {16, 32, 64, 128},
                           {2, 4, 8}, Real(0.15), Real(0.25), true, 10);
}

CheckResult check_convergence_3d() {
  return convergence_check(4, "3D convergence (p=2, Dirichlet, modes 2/10/16)", "laplace_dirichlet_3d",
                           {8, 16, 32, 64}, {2, 10, 16}, Real(0.2), Real(0.3), false, 30);
}

CheckResult check_schrodinger_gauss() {
  Timer t;
  CheckResult r{6, "Schrodinger table, Gauss columns", true, 0, {}};
  for (int p : {1, 2}) {
    const auto errs = schrodinger_errors(p, RuleSpec::gauss(p));
    std::size_t k = 0;
    std::array<std::vector<Real>, 3> cols;
    for (const auto& row : schrodinger_table()) {
      if (row.p != p) continue;
      for (std::size_t m = 0; m < 3; ++m) {
        const Real dev = errs[k][m] / row.gauss[m] - 1;
        expect(r, std::abs(dev) <= Real(0.02),
               fmt("p=%d N=%d mode %d: %.3Le vs %.2e (%+.1Lf%%)", p, row.n, kSchrodingerModes[m], errs[k][m],
                   row.gauss[m], 100 * dev));
        cols[m].push_back(errs[k][m]);
      }
      ++k;
    }
    const auto h = schrodinger_h(p);
    for (std::size_t m = 0; m < 3; ++m) {
      const Real rho = slope_of(h, cols[m]);
      const double ref = schrodinger_gauss_rho().at(p)[m];
      expect(r, std::abs(rho - ref) <= Real(0.1),
             fmt("p=%d mode %d: rho %.3Lf vs %.2f", p, kSchrodingerModes[m], rho, ref));
    }
  }
  expect_runtime(r, t, 20);
  return r;
}

CheckResult check_schrodinger_blended() {
  Timer t;
  CheckResult r{7, "Schrodinger table, Gauss-Gauss blended columns", true, 0, {}};
  for (int p : {1, 2}) {
    const Real tau = optimal_gauss_gauss_tau(p);
    r.details.push_back(fmt("     p=%d: tau = %.6Lf on G%d (sweep on the constant-coefficient problem)", p, tau, p + 1));
    const auto g = schrodinger_errors(p, RuleSpec::gauss(p));
    const auto o = schrodinger_errors(p, RuleSpec::gauss_gauss(p, tau));
    const auto h = schrodinger_h(p);
    const Real floor = p == 1 ? Real(2.7) : Real(5.5);
    for (std::size_t m = 0; m < 3; ++m) {
      std::vector<Real> col;
      bool smaller = true;
      for (std::size_t k = 0; k < o.size(); ++k) {
        col.push_back(o[k][m]);
        smaller = smaller && o[k][m] < g[k][m];
      }
      const Real rho = slope_of(h, col);
      expect(r, rho >= floor, fmt("p=%d mode %d: rho %.3Lf >= %.1Lf", p, kSchrodingerModes[m], rho, floor));
      expect(r, smaller, fmt("p=%d mode %d: blended error below Gauss error at every N", p, kSchrodingerModes[m]));
    }
  }
  r.seconds = t.seconds();
  return r;
}

CheckResult check_spectrum_branch() {
  Timer t;
  CheckResult r{8, "spectrum branch (N=1000, p=2, Neumann)", true, 0, {}};
  const auto problem = model_problem("laplace_neumann_1d");
  const int dofs = 1000;
  const int n = elements_for_dofs(problem, 2, dofs);
  const auto g = discrete_spectrum(problem, 2, n, RuleSpec::gauss(2));
  const auto o = discrete_spectrum(problem, 2, n, RuleSpec::optimal(2));
  std::vector<int> modes;
  for (int j = 1; 10 * j <= 3 * dofs; ++j) modes.push_back(j);
  const auto eg = relative_errors(g, problem, modes);
  const auto eo = relative_errors(o, problem, modes);
  int violations = 0;
  int first = 0;
  for (std::size_t i = 0; i < modes.size(); ++i)
    if (std::abs(eo[i]) > std::abs(eg[i])) {
      if (!violations) first = modes[i];
      ++violations;
    }
  expect(r, violations == 0,
         fmt("|optimal error| <= |G3 error| for modes 1..%zu (%d violations%s)", modes.size(), violations,
             violations ? fmt(", first at j=%d", first).c_str() : ""));
  r.details.push_back(fmt("     j=1: G3 %.3Le optimal %.3Le; j=300: G3 %.3Le optimal %.3Le", eg.front(), eo.front(),
                          eg.back(), eo.back()));
  expect_runtime(r, t, 60);
  return r;
}

CheckResult check_grid3d_dominance() {
  Timer t;
  CheckResult r{0, "3D error grid dominance (p=2, 16 elements/dim)", true, 0, {}};
  const int p = 2;
  const int n = 16;
  const auto g1 = discrete_spectrum(model_problem("laplace_dirichlet_1d"), p, n, RuleSpec::gauss(p));
  const auto o1 = discrete_spectrum(model_problem("laplace_dirichlet_1d"), p, n, RuleSpec::optimal(p));
  const int n1 = static_cast<int>(g1.size());
  const int kmax = n1 / 3;
  constexpr Real pi2 = std::numbers::pi_v<Real> * std::numbers::pi_v<Real>;
  int violations = 0;
  for (int k = 1; k <= kmax; ++k)
    for (int l = 1; l <= kmax; ++l)
      for (int m = 1; m <= kmax; ++m) {
        const Real exact = (k * k + l * l + m * m) * pi2;
        const auto at = [&](const Spectrum<Real>& s) {
          return s.eigenvalues[k - 1] + s.eigenvalues[l - 1] + s.eigenvalues[m - 1];
        };
        if (std::abs(at(o1) - exact) > std::abs(at(g1) - exact)) ++violations;
      }
  expect(r, violations == 0, fmt("|optimal error| <= |Gauss error| for k,l,m <= %d (%d violations)", kmax, violations));
  r.seconds = t.seconds();
  return r;
}

std::vector<std::function<CheckResult()>> checks_for_command(const std::string& command) {
  if (command == "dispersion") return {check_dispersion_coefficients, check_tau_recovery};
  if (command == "convergence") return {check_convergence_1d, check_convergence_3d};
  if (command == "schrodinger") return {check_schrodinger_gauss, check_schrodinger_blended};
  if (command == "spectrum") return {check_spectrum_branch};
  if (command == "grid3d") return {check_grid3d_dominance};
  return {};
}

std::string format_check(const CheckResult& r) {
  std::string out = std::string(r.pass ? "PASS" : "FAIL") + " [" +
                    (r.criterion ? std::to_string(r.criterion) : std::string("-")) + "] " + r.name +
                    fmt(" (%.2f s)", r.seconds) + "\n";
  for (const auto& d : r.details) out += "    " + d + "\n";
  return out;
}

}  // namespace igaspec
