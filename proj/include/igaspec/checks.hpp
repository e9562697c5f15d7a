#pragma once

// Reproduction checks against the reference results. Shared by the CLI
// `--check` mode and the acceptance test binary.

#include <functional>
#include <string>
#include <vector>

namespace igaspec {

struct CheckResult {
  int criterion = 0;  ///< 0 for checks outside the numbered list
  std::string name;
  bool pass = false;
  double seconds = 0;
  std::vector<std::string> details;
};

/// Dispersion coefficients of G3, L3 and blends (p = 2, Neumann).
CheckResult check_dispersion_coefficients();
/// tau sweep optima for p = 2 and p = 3.
CheckResult check_tau_recovery();
/// 1D Neumann convergence slopes for modes {2, 4, 8}.
CheckResult check_convergence_1d();
/// 3D Dirichlet convergence slopes for modes {2, 10, 16}.
CheckResult check_convergence_3d();
/// Gauss columns of the Schrodinger table.
CheckResult check_schrodinger_gauss();
/// Gauss-Gauss blended columns of the Schrodinger table (orders only).
CheckResult check_schrodinger_blended();
/// Optimal rule dominates G3 on the N = 1000 spectrum for j/N <= 0.3.
CheckResult check_spectrum_branch();
/// Optimal rule dominates Gauss on the 3D error grid for k, l, m <= N/3.
CheckResult check_grid3d_dominance();

/// Checks run by `igaspec <command> --check`.
std::vector<std::function<CheckResult()>> checks_for_command(const std::string& command);

/// "PASS [3] name (1.2 s)" followed by indented detail lines.
std::string format_check(const CheckResult& r);

}  // namespace igaspec
