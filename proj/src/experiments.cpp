#include "igaspec/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>

#include <json.hpp>

#include "igaspec/error.hpp"

namespace igaspec {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

Real parse_real(const std::string& text, const std::string& context) {
  try {
    std::size_t used = 0;
    const Real v = std::stold(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("invalid number '" + text + "' in " + context);
}

void require_finite(Real v, const std::string& what) {
  if (!std::isfinite(v)) throw NumericalError("non-finite value produced for " + what);
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : path_(path), out_(path) {
    if (!out_) throw Error("cannot write '" + path.string() + "'");
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

  std::string path() const { return path_.string(); }

 private:
  fs::path path_;
  std::ofstream out_;
};

fs::path output_dir(const ExperimentConfig& c) {
  fs::path dir(c.output);
  fs::create_directories(dir);
  return dir;
}

std::string write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  return path.string();
}

/// discrete_spectrum with a remediation hint for singular coefficients.
Spectrum<Real> solve_problem(const ModelProblem& problem, int p, int n, const RuleSpec& rule) {
  try {
    return discrete_spectrum(problem, p, n, rule);
  } catch (const SingularCoefficientError& e) {
    throw SingularCoefficientError(std::string(e.what()) + " [rule " + rule.label +
                                       "]; rules with nodes on element ends (Lobatto) cannot be used with "
                                       "this potential, use a Gauss-Gauss blend such as 'optimal_gg'",
                                   e.element(), e.node());
  }
}

double to_json_number(Real v) { return static_cast<double>(v); }

json slope_json(const std::optional<Real>& s) { return s ? json(to_json_number(*s)) : json(nullptr); }

std::vector<double> to_doubles(const std::vector<Real>& v) { return {v.begin(), v.end()}; }

}  // namespace

std::string format_number(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15Le", v);
  return buf;
}

std::string file_label(const std::string& label) {
  std::string out;
  for (char ch : label) {
    const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                      ch == '.' || ch == '-' || ch == '_';
    out.push_back(keep ? ch : '_');
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

Real optimal_gauss_gauss_tau(int p) {
  static std::mutex mu;
  static std::map<int, Real> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(p); it != cache.end()) return it->second;
  // tau = 1 is plain G_{p+1}; search upwards in widening brackets.
  const std::vector<std::vector<Real>> grids{{1, 1.5L, 2.5L}, {2.5L, 3.5L, 4.5L, 5.5L}};
  for (const auto& grid : grids) {
    try {
      const Real tau = tau_sweep(p, grid, BlendPair::gauss_gauss).tau_star;
      cache.emplace(p, tau);
      return tau;
    } catch (const NumericalError&) {
    }
  }
  throw NumericalError("no Gauss-Gauss blending parameter found for degree " + std::to_string(p));
}

RuleSpec resolve_rule(const std::string& kw, int p, std::optional<Real> gg_tau) {
  if (kw == "gauss") return RuleSpec::gauss(p);
  if (kw == "lobatto") return RuleSpec::lobatto(p);
  if (kw == "optimal") return RuleSpec::optimal(p);
  if (kw == "optimal_gg") return RuleSpec::gauss_gauss(p, gg_tau ? *gg_tau : optimal_gauss_gauss_tau(p), "optimal_gg");
  if (kw.rfind("tau=", 0) == 0) return RuleSpec::degree_pair(p, parse_real(kw.substr(4), "'" + kw + "'"), kw);
  if (kw.rfind("blend(", 0) == 0 && kw.back() == ')') {
    const std::string body = kw.substr(6, kw.size() - 7);
    const auto c1 = body.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : body.find(',', c1 + 1);
    if (c2 == std::string::npos) throw InvalidArgument("expected blend(A,B,tau), got '" + kw + "'");
    return RuleSpec::blended(body.substr(0, c1), body.substr(c1 + 1, c2 - c1 - 1),
                             parse_real(body.substr(c2 + 1), "'" + kw + "'"), kw);
  }
  if (!kw.empty() && (kw[0] == 'G' || kw[0] == 'L')) return RuleSpec::single(kw);
  throw InvalidArgument("unknown rule '" + kw + "'");
}

CommandResult cmd_spectrum(const ExperimentConfig& c) {
  CommandResult res;
  const auto problem = model_problem(c.problem);
  const auto dir = output_dir(c);
  for (int p : c.degrees) {
    const int n = elements_for_dofs(problem, p, c.dofs);
    for (const auto& kw : c.rules) {
      const auto rule = resolve_rule(kw, p);
      const auto s = solve_problem(problem, p, n, rule);
      const int total = static_cast<int>(s.size());
      const int offset = problem.has_zero_mode() ? 1 : 0;
      const auto exact = exact_spectrum(problem, std::max(1, comparable_modes(problem, s)));
      CsvWriter csv(dir / ("spectrum_p" + std::to_string(p) + "_" + file_label(rule.label) + ".csv"),
                    {"mode_index", "j_over_N", "lambda_exact", "lambda_h", "relative_error"});
      for (int i = 0; i < total; ++i) {
        const int j = i + 1 - offset;  // Neumann rows start at the zero mode
        const Real lh = s.eigenvalues[static_cast<std::size_t>(i)];
        const Real le = j == 0 ? Real(0) : exact[static_cast<std::size_t>(j - 1)];
        // The zero mode has no relative error; its absolute error is reported.
        const Real err = j == 0 ? lh : (lh - le) / le;
        require_finite(err, "mode " + std::to_string(j));
        csv.row({std::to_string(j), format_number(static_cast<Real>(j) / total), format_number(le), format_number(lh),
                 format_number(err)});
      }
      res.files.push_back(csv.path());
    }
  }
  return res;
}

CommandResult cmd_convergence(const ExperimentConfig& c) {
  CommandResult res;
  const auto problem = model_problem(c.problem);
  const auto dir = output_dir(c);
  const int offset = problem.has_zero_mode() ? 1 : 0;
  CsvWriter csv(dir / "convergence.csv",
                {"p", "n_elements", "h", "mode", "rule", "lambda_exact", "lambda_h", "relative_error"});
  json fits = json::array();
  for (int p : c.degrees) {
    for (const auto& kw : c.rules) {
      const auto rule = resolve_rule(kw, p);
      std::map<int, std::vector<std::pair<Real, Real>>> by_mode;
      for (int n : c.meshes) {
        const auto s = solve_problem(problem, p, n, rule);
        const auto errs = relative_errors(s, problem, c.modes);
        const Real h = (problem.upper - problem.lower) / n;
        for (std::size_t i = 0; i < c.modes.size(); ++i) {
          const int m = c.modes[i];
          require_finite(errs[i], "mode " + std::to_string(m));
          const Real lh = s.eigenvalues[static_cast<std::size_t>(m - 1 + offset)];
          csv.row({std::to_string(p), std::to_string(n), format_number(h), std::to_string(m), rule.label,
                   format_number(problem.exact_eigenvalue(m)), format_number(lh), format_number(errs[i])});
          by_mode[m].emplace_back(h, errs[i]);
        }
      }
      for (int m : c.modes) {
        const auto rep = fit_convergence(by_mode[m]);
        for (const auto& w : rep.warnings)
          res.warnings.push_back("p=" + std::to_string(p) + " rule=" + rule.label + " mode=" + std::to_string(m) +
                                 ": " + w);
        fits.push_back({{"p", p},
                        {"rule", rule.label},
                        {"mode", m},
                        {"slope", slope_json(rep.fitted_slope)},
                        {"pairwise_slopes", to_doubles(rep.pairwise_slopes)},
                        {"h_min", to_json_number(rep.h_min)},
                        {"h_max", to_json_number(rep.h_max)},
                        {"meshes", c.meshes},
                        {"warnings", rep.warnings}});
      }
    }
  }
  res.files.push_back(csv.path());
  json out{{"problem", c.problem}, {"fits", fits}};
  res.files.push_back(write_json(dir / "convergence.json", out));
  return res;
}

CommandResult cmd_schrodinger(const ExperimentConfig& c) {
  CommandResult res;
  const auto problem = model_problem(c.problem);
  const auto dir = output_dir(c);
  CsvWriter csv(dir / "schrodinger.csv", {"p", "N", "rule", "mode", "relative_error"});
  json entries = json::array();
  json rhos = json::array();
  json taus = json::object();
  std::vector<std::vector<std::string>> rho_rows;
  for (int p : c.degrees) {
    const auto& sizes = c.sizes_by_degree.at(p);
    for (const auto& kw : c.rules) {
      const auto rule = resolve_rule(kw, p);
      if (kw == "optimal_gg") taus[std::to_string(p)] = to_json_number(rule.tau);
      std::map<int, std::vector<std::pair<Real, Real>>> by_mode;
      for (int table_n : sizes) {
        const auto s = solve_problem(problem, p, schrodinger_elements(table_n), rule);
        const auto errs = relative_errors(s, problem, c.modes);
        for (std::size_t i = 0; i < c.modes.size(); ++i) {
          require_finite(errs[i], "mode " + std::to_string(c.modes[i]));
          csv.row({std::to_string(p), std::to_string(table_n), rule.label, std::to_string(c.modes[i]),
                   format_number(errs[i])});
          entries.push_back({{"p", p},
                             {"N", table_n},
                             {"rule", rule.label},
                             {"mode", c.modes[i]},
                             {"relative_error", to_json_number(errs[i])}});
          by_mode[c.modes[i]].emplace_back(Real(1) / table_n, errs[i]);
        }
      }
      for (int m : c.modes) {
        const auto rep = fit_convergence(by_mode[m]);
        for (const auto& w : rep.warnings) res.warnings.push_back(rule.label + " mode " + std::to_string(m) + ": " + w);
        rho_rows.push_back({std::to_string(p), "rho", rule.label, std::to_string(m),
                            rep.fitted_slope ? format_number(*rep.fitted_slope) : "nan"});
        rhos.push_back({{"p", p}, {"rule", rule.label}, {"mode", m}, {"rho", slope_json(rep.fitted_slope)}});
      }
    }
  }
  for (const auto& r : rho_rows) csv.row(r);
  res.files.push_back(csv.path());
  json out{{"problem", c.problem},
           {"mesh_mapping", "table size N -> N/2 uniform elements on (0, pi/2)"},
           {"gauss_gauss_tau", taus},
           {"entries", entries},
           {"rho", rhos}};
  res.files.push_back(write_json(dir / "schrodinger.json", out));
  return res;
}

CommandResult cmd_dispersion(const ExperimentConfig& c) {
  CommandResult res;
  const auto problem = model_problem(c.problem);
  const auto dir = output_dir(c);
  json results = json::array();
  for (int p : c.degrees) {
    const auto meshes = c.meshes.empty() ? default_dispersion_meshes(p) : c.meshes;
    for (const auto& kw : c.rules) {
      const auto rule = resolve_rule(kw, p);
      std::vector<int> powers = c.power > 0 ? std::vector<int>{c.power} : std::vector<int>{2 * p, 2 * p + 2};
      json estimates = json::array();
      std::vector<DispersionEstimate> ests;
      for (int power : powers) {
        auto e = dispersion_coefficient(problem, p, rule, power, meshes);
        require_finite(e.coefficient, rule.label + " coefficient");
        if (!e.converged)
          res.warnings.push_back("p=" + std::to_string(p) + " rule=" + rule.label + " power=" +
                                 std::to_string(power) + ": extrapolation not converged");
        estimates.push_back({{"exponent", power},
                             {"coefficient", to_json_number(e.coefficient)},
                             {"converged", e.converged},
                             {"raw_coefficients", to_doubles(e.raw_coefficients)},
                             {"relative_errors", to_doubles(e.relative_errors)}});
        ests.push_back(std::move(e));
      }
      // The leading term is the first power whose coefficient settles.
      std::size_t lead = 0;
      while (lead + 1 < ests.size() && !ests[lead].converged) ++lead;
      results.push_back({{"p", p},
                         {"rule", rule.label},
                         {"tau", rule.is_blend() ? json(to_json_number(rule.tau)) : json(nullptr)},
                         {"meshes", meshes},
                         {"leading",
                          {{"exponent", ests[lead].power},
                           {"coefficient", to_json_number(ests[lead].coefficient)},
                           {"converged", ests[lead].converged}}},
                         {"estimates", estimates}});
    }
  }
  json out{{"problem", c.problem}, {"results", results}};
  if (!c.tau_grid.empty()) {
    json sweeps = json::array();
    const std::vector<Real> grid(c.tau_grid.begin(), c.tau_grid.end());
    for (int p : c.degrees) {
      const auto rep = tau_sweep(p, grid);
      sweeps.push_back({{"p", p},
                        {"problem", rep.problem},
                        {"exponent", rep.power},
                        {"taus", to_doubles(rep.taus)},
                        {"coefficients", to_doubles(rep.coefficients)},
                        {"tau_star", to_json_number(rep.tau_star)},
                        {"bracket", {to_json_number(rep.bracket[0]), to_json_number(rep.bracket[1])}}});
    }
    out["sweeps"] = sweeps;
  }
  res.files.push_back(write_json(dir / "dispersion.json", out));
  return res;
}

CommandResult cmd_grid3d(const ExperimentConfig& c) {
  CommandResult res;
  const auto problem = model_problem(c.problem);
  const auto dir = output_dir(c);
  constexpr Real pi = std::numbers::pi_v<Real>;
  for (int p : c.degrees)
    for (int n : c.meshes)
      for (const auto& kw : c.rules) {
        const auto rule = resolve_rule(kw, p);
        const auto s = solve_problem(problem, p, n, rule);
        std::size_t k1 = 1;
        while (k1 * k1 * k1 < s.size()) ++k1;
        std::vector<Real> grid(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
          const auto& t = s.tensor_indices[i];
          grid[(static_cast<std::size_t>(t[0] - 1) * k1 + static_cast<std::size_t>(t[1] - 1)) * k1 +
               static_cast<std::size_t>(t[2] - 1)] = s.eigenvalues[i];
        }
        CsvWriter csv(dir / ("grid3d_p" + std::to_string(p) + "_n" + std::to_string(n) + "_" +
                             file_label(rule.label) + ".csv"),
                      {"k", "l", "m", "lambda_exact", "lambda_h", "relative_error"});
        for (std::size_t k = 1; k <= k1; ++k)
          for (std::size_t l = 1; l <= k1; ++l)
            for (std::size_t m = 1; m <= k1; ++m) {
              const Real le = static_cast<Real>(k * k + l * l + m * m) * pi * pi;
              const Real lh = grid[((k - 1) * k1 + (l - 1)) * k1 + (m - 1)];
              const Real err = (lh - le) / le;
              require_finite(err, "grid entry");
              csv.row({std::to_string(k), std::to_string(l), std::to_string(m), format_number(le), format_number(lh),
                       format_number(err)});
            }
        res.files.push_back(csv.path());
      }
  return res;
}

CommandResult run_command(const ExperimentConfig& c) {
  if (c.command == "spectrum") return cmd_spectrum(c);
  if (c.command == "convergence") return cmd_convergence(c);
  if (c.command == "schrodinger") return cmd_schrodinger(c);
  if (c.command == "dispersion") return cmd_dispersion(c);
  if (c.command == "grid3d") return cmd_grid3d(c);
  throw ConfigError("command", "unknown command '" + c.command + "'");
}

}  // namespace igaspec
