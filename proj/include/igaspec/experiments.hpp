#pragma once

// The five experiment commands. Each writes CSV/JSON files into the
// configured output directory and returns what it wrote.

#include <optional>
#include <string>
#include <vector>

#include "igaspec/analysis.hpp"
#include "igaspec/config.hpp"

namespace igaspec {

/// Resolves a rule keyword (see ExperimentConfig) for degree p. `gg_tau` is
/// the Gauss-Gauss parameter used by "optimal_gg"; when absent it is taken
/// from optimal_gauss_gauss_tau(p).
RuleSpec resolve_rule(const std::string& keyword, int p, std::optional<Real> gg_tau = std::nullopt);

/// tau for tau G_{p+1} + (1 - tau) G_p found by the sweep on the
/// constant-coefficient problem. Memoized per degree.
Real optimal_gauss_gauss_tau(int p);

/// 16 significant digits, scientific notation.
std::string format_number(Real v);

/// Filesystem-safe version of a rule label.
std::string file_label(const std::string& label);

struct CommandResult {
  std::vector<std::string> files;
  std::vector<std::string> warnings;
};

CommandResult cmd_spectrum(const ExperimentConfig& config);
CommandResult cmd_convergence(const ExperimentConfig& config);
CommandResult cmd_schrodinger(const ExperimentConfig& config);
CommandResult cmd_dispersion(const ExperimentConfig& config);
CommandResult cmd_grid3d(const ExperimentConfig& config);

/// Dispatches on config.command.
CommandResult run_command(const ExperimentConfig& config);

}  // namespace igaspec
