// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "igaspec/checks.hpp"
#include "igaspec/eigen.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

namespace {

using igaspec::CheckResult;

CheckResult check_kronecker_oracle() {
  using T = long double;
  const auto start = std::chrono::steady_clock::now();
  CheckResult r{5, "Kronecker operators vs direct 3D assembly", true, 0, {}};
  long double worst_matrix = 0;
  long double worst_eig = 0;
  for (int p : {1, 2})
    for (int n : {3, 4})
      for (const auto bc : {igaspec::BoundaryCondition::dirichlet, igaspec::BoundaryCondition::neumann})
        for (const bool blended : {false, true}) {
          const auto g = igaspec::gauss_legendre<T>(p + 1);
          const auto rule = blended ? igaspec::optimal_blend<T>(p).merged : g;
          const auto rules = igaspec::QuadratureTriple<T>{g, rule};
          const T gamma = 3;
          const igaspec::BasisSpec<T> spec(igaspec::KnotVector<T>::uniform_open(T(0), T(1), n, p));
          const auto op = igaspec::assemble_tensor(spec, igaspec::Coefficient<T>::constant(gamma), 3, rules, bc);
          const auto dense = op.materialize();
          const auto direct = igaspec::testing::assemble_direct_3d<T>(p, n, gamma, g, rule, bc);

          const T kscale = std::max<T>(1, direct.K.max_abs());
          const T mscale = std::max<T>(1, direct.M.max_abs());
          long double dm = 0;
          for (std::size_t i = 0; i < dense.K.rows(); ++i)
            for (std::size_t j = 0; j < dense.K.cols(); ++j) {
              dm = std::max<long double>(dm, std::abs(dense.K(i, j) - direct.K(i, j)) / kscale);
              dm = std::max<long double>(dm, std::abs(dense.M(i, j) - direct.M(i, j)) / mscale);
            }
          worst_matrix = std::max(worst_matrix, dm);

          const auto tensor = igaspec::solve_tensor(op, {.eigenvectors = false, .rayleigh_refine = true});
          const auto full = igaspec::solve_generalized(direct.K, direct.M, {.eigenvectors = false});
          long double de = 0;
          for (std::size_t j = 0; j < full.size(); ++j)
            de = std::max<long double>(
                de, std::abs(tensor.eigenvalues[j] - full.eigenvalues[j]) / std::max<T>(1, std::abs(full.eigenvalues[j])));
          worst_eig = std::max(worst_eig, de);

          char line[200];
          std::snprintf(line, sizeof line, "     p=%d n=%d %s %s: matrices %.2Le, eigenvalues %.2Le", p, n,
                        igaspec::to_string(bc), blended ? "optimal" : "gauss", dm, de);
          r.details.push_back(line);
        }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char line[200];
  std::snprintf(line, sizeof line, "%s entrywise max %.2Le <= 1e-12", worst_matrix <= 1e-12L ? "ok  " : "FAIL",
                worst_matrix);
  r.details.push_back(line);
  std::snprintf(line, sizeof line, "%s eigenvalue max %.2Le <= 1e-10", worst_eig <= 1e-10L ? "ok  " : "FAIL",
                worst_eig);
  r.details.push_back(line);
  std::snprintf(line, sizeof line, "%s runtime %.2f s < 60 s", r.seconds < 60 ? "ok  " : "FAIL", r.seconds);
  r.details.push_back(line);
  r.pass = worst_matrix <= 1e-12L && worst_eig <= 1e-10L && r.seconds < 60;
  return r;
}

CheckResult check_property_suites() {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r{9, "property suites", true, 0, {}};
  for (const auto& p : igaspec::testing::all_property_suites()) {
    char line[300];
    std::snprintf(line, sizeof line, "%s %s: worst %.2Le (tol %.0Le)%s%s", p.pass ? "ok  " : "FAIL", p.name.c_str(),
                  p.worst, p.tolerance, p.note.empty() ? "" : ", first failure: ", p.note.c_str());
    r.details.push_back(line);
    r.pass = r.pass && p.pass;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

int main() {
  const std::vector<CheckResult (*)()> checks{
      igaspec::check_dispersion_coefficients, igaspec::check_tau_recovery, igaspec::check_convergence_1d,
      igaspec::check_convergence_3d,          check_kronecker_oracle,       igaspec::check_schrodinger_gauss,
      igaspec::check_schrodinger_blended,     igaspec::check_spectrum_branch, check_property_suites};
  int failures = 0;
  std::vector<std::string> summary;
  for (const auto check : checks) {
    const auto r = check();
    std::cout << igaspec::format_check(r) << std::flush;
    if (!r.pass) ++failures;
    summary.push_back(std::string(r.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(r.criterion));
  }
  std::cout << "\nsummary:\n";
  for (const auto& s : summary) std::cout << "  " << s << "\n";
  std::cout << failures << " of " << checks.size() << " criteria failed\n";
  return failures ? 1 : 0;
}
