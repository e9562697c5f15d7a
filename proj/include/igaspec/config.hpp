#pragma once

// Experiment configuration: JSON file plus command-line overrides.

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace igaspec {

/// Rule keywords accepted in `rules`:
///   G<m>, L<m>          single Gauss-Legendre / Gauss-Lobatto rule
///   gauss, lobatto      G_{p+1} / L_{p+1}
///   optimal             dispersion-optimal Gauss/Lobatto blend (p = 1, 2, 3)
///   optimal_gg          tau G_{p+1} + (1 - tau) G_p, tau from the sweep
///   tau=<t>             degree pair blended with parameter t
///   blend(A,B,<t>)      explicit blend t A + (1 - t) B
struct ExperimentConfig {
  std::string command;
  std::string problem;
  std::vector<int> degrees;
  /// Element counts (spectrum: unused; schrodinger: table sizes N).
  std::vector<int> meshes;
  /// Per-degree table sizes for the Schrodinger command.
  std::map<int, std::vector<int>> sizes_by_degree;
  /// Total degrees of freedom for the spectrum command.
  int dofs = 0;
  std::vector<std::string> rules;
  std::string bc;
  std::vector<int> modes;
  std::string output;
  /// Dispersion exponent; 0 selects 2p and 2p + 2.
  int power = 0;
  /// Dispersion tau sweep grid; empty disables the sweep.
  std::vector<double> tau_grid;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

const std::vector<std::string>& command_names();

/// Command-line overrides, applied on top of the file contents.
struct ConfigOverrides {
  std::optional<int> p;
  std::optional<int> n;
  std::optional<double> tau;
  std::vector<std::string> rules;
  std::optional<std::string> bc;
  std::optional<std::string> out;
};

/// Parses JSON text, applies overrides, fills per-command defaults and
/// validates. Throws ConfigError naming the offending field (or the line for
/// syntax errors).
ExperimentConfig parse_config(const std::string& json_text, const std::string& command,
                              const ConfigOverrides& overrides = {});

ExperimentConfig load_config(const std::string& path, const std::string& command,
                             const ConfigOverrides& overrides = {});

/// Default configuration of a command (the reference experiment setup).
ExperimentConfig default_config(const std::string& command);

/// Fully resolved configuration as JSON text; parse_config inverts it.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace igaspec
