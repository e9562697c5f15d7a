// igaspec: runs the spectral-approximation experiments from JSON configs.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "igaspec/checks.hpp"
#include "igaspec/config.hpp"
#include "igaspec/error.hpp"
#include "igaspec/experiments.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;
constexpr int kCheckFailure = 4;

struct Options {
  std::string config;
  std::optional<int> p;
  std::optional<int> n;
  std::optional<double> tau;
  std::vector<std::string> rules;
  std::optional<std::string> bc;
  std::optional<std::string> out;
  bool check = false;
  bool print_config = false;
};

void add_options(CLI::App& sub, Options& o) {
  sub.add_option("--config", o.config, "JSON experiment configuration")->check(CLI::ExistingFile);
  sub.add_option("--p", o.p, "Spline degree (replaces `degrees`)");
  sub.add_option("--n", o.n, "Degrees of freedom (spectrum) or element count");
  sub.add_option("--tau", o.tau, "Add a degree-pair blend with this tau");
  sub.add_option("--rule", o.rules, "Rule keyword; repeatable, replaces `rules`");
  sub.add_option("--bc", o.bc, "Boundary condition: neumann or dirichlet");
  sub.add_option("--out", o.out, "Output directory");
  sub.add_flag("--check", o.check, "Run the reproduction checks for this command instead");
  sub.add_flag("--print-config", o.print_config, "Print the resolved configuration and exit");
}

std::string describe(const std::string& command) {
  if (command == "spectrum") return "Full discrete spectrum against the exact one, one CSV per rule";
  if (command == "convergence") return "Eigenvalue errors over a mesh sequence with fitted slopes";
  if (command == "schrodinger") return "Poschl-Teller eigenvalue error table with fitted orders";
  if (command == "dispersion") return "Leading dispersion coefficients and optional tau sweeps";
  if (command == "grid3d") return "3D relative errors over all (k, l, m) on one mesh";
  return {};
}

int run_checks(const std::string& command) {
  bool all = true;
  for (const auto& check : igaspec::checks_for_command(command)) {
    const auto r = check();
    std::cout << igaspec::format_check(r) << std::flush;
    all = all && r.pass;
  }
  return all ? kOk : kCheckFailure;
}

int run(const std::string& command, const Options& o) {
  if (o.check) return run_checks(command);

  igaspec::ConfigOverrides overrides{o.p, o.n, o.tau, o.rules, o.bc, o.out};
  const auto config = o.config.empty() ? igaspec::parse_config("{}", command, overrides)
                                       : igaspec::load_config(o.config, command, overrides);
  if (o.print_config) {
    std::cout << igaspec::serialize_config(config) << "\n";
    return kOk;
  }
  const auto result = igaspec::run_command(config);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& f : result.files) std::cout << f << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isogeometric spectral approximation with blended quadrature"};
  app.require_subcommand(1);

  std::vector<std::pair<CLI::App*, Options>> subs;
  subs.reserve(igaspec::command_names().size());
  for (const auto& name : igaspec::command_names()) {
    subs.emplace_back(app.add_subcommand(name, describe(name)), Options{});
    add_options(*subs.back().first, subs.back().second);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  for (const auto& [sub, options] : subs) {
    if (!sub->parsed()) continue;
    try {
      return run(sub->get_name(), options);
    } catch (const igaspec::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kConfigError;
    } catch (const igaspec::NumericalError& e) {
      std::cerr << "numerical error: " << e.what() << "\n";
      return kNumericalError;
    } catch (const igaspec::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kConfigError;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return kConfigError;
}
