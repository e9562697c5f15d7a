#include "igaspec/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "igaspec/analysis.hpp"
#include "igaspec/error.hpp"
#include "igaspec/experiments.hpp"

namespace igaspec {

using nlohmann::json;

namespace {

const std::set<std::string> kFields{"command", "problem", "p",     "degrees",  "meshes",   "sizes_by_degree",
                                    "dofs",    "rules",   "bc",    "modes",    "output",   "power",
                                    "tau_grid"};

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

int get_int(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<int>();
}

std::string get_string(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

std::vector<int> get_int_list(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError(key, "expected a list of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer()) throw ConfigError(key + "[" + std::to_string(i) + "]", "expected an integer");
    out.push_back(v[i].get<int>());
  }
  return out;
}

std::vector<std::string> get_string_list(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw ConfigError(key, "expected a list of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) throw ConfigError(key + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

std::vector<double> get_double_list(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw ConfigError(key, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(key + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::string format_tau(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  return buf;
}

bool is_laplace_1d(const std::string& problem) {
  return problem == "laplace_dirichlet_1d" || problem == "laplace_neumann_1d";
}

void fill_defaults(ExperimentConfig& c, const json& j) {
  const bool three_d = c.problem == "laplace_dirichlet_3d";
  if (!j.contains("output")) c.output = "out";
  if (c.command == "spectrum") {
    if (!j.contains("dofs")) c.dofs = 1000;
    if (!j.contains("rules")) c.rules = {"gauss", "optimal"};
  } else if (c.command == "convergence") {
    if (!j.contains("meshes")) c.meshes = three_d ? std::vector<int>{8, 16, 32, 64} : std::vector<int>{16, 32, 64, 128};
    if (!j.contains("modes")) c.modes = three_d ? std::vector<int>{2, 10, 16} : std::vector<int>{2, 4, 8};
    if (!j.contains("rules")) c.rules = {"gauss", "optimal"};
  } else if (c.command == "schrodinger") {
    if (!j.contains("degrees") && !j.contains("p")) c.degrees = {1, 2};
    if (!j.contains("modes")) c.modes = {1, 2, 4};
    if (!j.contains("rules")) c.rules = {"gauss", "optimal_gg"};
    if (c.sizes_by_degree.empty()) {
      for (int p : c.degrees) {
        if (!c.meshes.empty())
          c.sizes_by_degree[p] = c.meshes;
        else if (p == 1)
          c.sizes_by_degree[p] = {40, 80, 160};
        else
          c.sizes_by_degree[p] = {10, 20, 40};
      }
    }
    c.meshes.clear();
  } else if (c.command == "dispersion") {
    if (!j.contains("rules")) c.rules = {"gauss", "lobatto", "optimal"};
  } else if (c.command == "grid3d") {
    if (!j.contains("meshes")) c.meshes = {16};
    if (!j.contains("rules")) c.rules = {"gauss", "optimal"};
  }
}

std::string default_problem(const std::string& command) {
  if (command == "schrodinger") return "schrodinger_poschl_teller";
  if (command == "grid3d") return "laplace_dirichlet_3d";
  return "laplace_neumann_1d";
}

void validate(ExperimentConfig& c) {
  const auto& names = model_problem_names();
  if (std::find(names.begin(), names.end(), c.problem) == names.end())
    throw ConfigError("problem", "unknown problem '" + c.problem + "'");
  const auto problem = model_problem(c.problem);

  if (c.command == "spectrum" || c.command == "dispersion") {
    if (problem.dims != 1) throw ConfigError("problem", c.command + " needs a 1D problem");
  }
  if (c.command == "dispersion" && !is_laplace_1d(c.problem))
    throw ConfigError("problem", "dispersion needs a 1D Laplace problem");
  if (c.command == "schrodinger" && c.problem != "schrodinger_poschl_teller")
    throw ConfigError("problem", "schrodinger runs the schrodinger_poschl_teller problem");
  if (c.command == "grid3d" && c.problem != "laplace_dirichlet_3d")
    throw ConfigError("problem", "grid3d runs the laplace_dirichlet_3d problem");

  if (c.degrees.empty()) throw ConfigError("degrees", "at least one degree is required");
  for (std::size_t i = 0; i < c.degrees.size(); ++i)
    if (c.degrees[i] < 1 || c.degrees[i] > kMaxDegree)
      throw ConfigError("degrees[" + std::to_string(i) + "]",
                        "degree must lie in [1, " + std::to_string(kMaxDegree) + "]");

  for (std::size_t i = 0; i < c.meshes.size(); ++i)
    if (c.meshes[i] < 1) throw ConfigError("meshes[" + std::to_string(i) + "]", "element counts must be >= 1");
  if ((c.command == "convergence" || c.command == "grid3d") && c.meshes.empty())
    throw ConfigError("meshes", "at least one mesh is required");
  if (c.command == "dispersion" && c.meshes.size() == 1)
    throw ConfigError("meshes", "dispersion estimates need at least two meshes");

  if (c.command == "spectrum") {
    if (c.dofs < 1) throw ConfigError("dofs", "must be >= 1");
    for (int p : c.degrees) {
      try {
        (void)elements_for_dofs(problem, p, c.dofs);
      } catch (const InvalidArgument& e) {
        throw ConfigError("dofs", e.what());
      }
    }
  }

  if (c.command == "schrodinger") {
    for (int p : c.degrees) {
      const auto it = c.sizes_by_degree.find(p);
      if (it == c.sizes_by_degree.end() || it->second.empty())
        throw ConfigError("sizes_by_degree", "no sizes for degree " + std::to_string(p));
      for (int n : it->second)
        if (n < 2 || n % 2 != 0)
          throw ConfigError("sizes_by_degree." + std::to_string(p), "table sizes must be even and >= 2");
    }
  }

  if ((c.command == "convergence" || c.command == "schrodinger") && c.modes.empty())
    throw ConfigError("modes", "at least one mode is required");
  for (std::size_t i = 0; i < c.modes.size(); ++i)
    if (c.modes[i] < 1) throw ConfigError("modes[" + std::to_string(i) + "]", "modes are 1-based");

  if (c.rules.empty()) throw ConfigError("rules", "at least one rule is required");
  for (std::size_t i = 0; i < c.rules.size(); ++i)
    for (int p : c.degrees) {
      try {
        (void)resolve_rule(c.rules[i], p, Real(2));
      } catch (const InvalidArgument& e) {
        throw ConfigError("rules[" + std::to_string(i) + "]", e.what());
      }
    }

  if (c.output.empty()) throw ConfigError("output", "must not be empty");
  if (c.power < 0) throw ConfigError("power", "must be >= 0 (0 selects 2p and 2p+2)");
  if (c.tau_grid.size() == 1) throw ConfigError("tau_grid", "needs at least two values");
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"spectrum", "convergence", "schrodinger", "dispersion", "grid3d"};
  return names;
}

ExperimentConfig parse_config(const std::string& json_text, const std::string& command_in,
                              const ConfigOverrides& ov) {
  json j;
  if (json_text.find_first_not_of(" \t\r\n") == std::string::npos) {
    j = json::object();
  } else {
    try {
      j = json::parse(json_text);
    } catch (const json::parse_error& e) {
      throw ConfigError("", "line " + std::to_string(line_of(json_text, e.byte)) + ": JSON syntax error: " +
                                e.what());
    }
  }
  if (!j.is_object()) throw ConfigError("", "configuration must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kFields.count(key)) throw ConfigError(key, "unknown field");

  ExperimentConfig c;
  c.command = command_in;
  if (j.contains("command")) {
    const auto file_command = get_string(j, "command");
    if (c.command.empty()) c.command = file_command;
    if (file_command != c.command)
      throw ConfigError("command", "file is for '" + file_command + "' but '" + c.command + "' was requested");
  }
  const auto& cmds = command_names();
  if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end())
    throw ConfigError("command", "unknown command '" + c.command + "'");

  // Overrides are folded into the JSON so that they pass the same checks.
  if (ov.p) {
    j.erase("degrees");
    j["p"] = *ov.p;
  }
  if (ov.n) {
    if (c.command == "spectrum") {
      j["dofs"] = *ov.n;
    } else {
      j["meshes"] = json::array({*ov.n});
      j.erase("sizes_by_degree");
    }
  }
  if (!ov.rules.empty() || ov.tau) {
    json rules = json::array();
    for (const auto& r : ov.rules) rules.push_back(r);
    if (ov.tau) rules.push_back("tau=" + format_tau(*ov.tau));
    j["rules"] = rules;
  }
  if (ov.bc) j["bc"] = *ov.bc;
  if (ov.out) j["output"] = *ov.out;

  c.problem = j.contains("problem") ? get_string(j, "problem") : default_problem(c.command);
  if (j.contains("p") && j.contains("degrees")) throw ConfigError("p", "give either 'p' or 'degrees', not both");
  if (j.contains("p")) c.degrees = {get_int(j, "p")};
  else if (j.contains("degrees")) c.degrees = get_int_list(j.at("degrees"), "degrees");
  else c.degrees = {2};
  if (j.contains("meshes")) c.meshes = get_int_list(j.at("meshes"), "meshes");
  if (j.contains("sizes_by_degree")) {
    const auto& v = j.at("sizes_by_degree");
    if (!v.is_object()) throw ConfigError("sizes_by_degree", "expected an object keyed by degree");
    for (const auto& [key, sizes] : v.items()) {
      int p = 0;
      try {
        std::size_t used = 0;
        p = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw ConfigError("sizes_by_degree." + key, "keys must be integer degrees");
      }
      c.sizes_by_degree[p] = get_int_list(sizes, "sizes_by_degree." + key);
    }
  }
  if (j.contains("dofs")) c.dofs = get_int(j, "dofs");
  if (j.contains("rules")) c.rules = get_string_list(j, "rules");
  if (j.contains("modes")) c.modes = get_int_list(j.at("modes"), "modes");
  if (j.contains("output")) c.output = get_string(j, "output");
  if (j.contains("power")) c.power = get_int(j, "power");
  if (j.contains("tau_grid")) c.tau_grid = get_double_list(j, "tau_grid");

  if (j.contains("bc")) {
    const auto bc = get_string(j, "bc");
    if (bc != "dirichlet" && bc != "neumann") throw ConfigError("bc", "expected 'dirichlet' or 'neumann'");
    if (is_laplace_1d(c.problem)) {
      c.problem = bc == "dirichlet" ? "laplace_dirichlet_1d" : "laplace_neumann_1d";
    } else if (bc != "dirichlet") {
      throw ConfigError("bc", "problem '" + c.problem + "' only supports dirichlet conditions");
    }
  }

  fill_defaults(c, j);
  validate(c);
  c.bc = to_string(model_problem(c.problem).bc);
  return c;
}

ExperimentConfig load_config(const std::string& path, const std::string& command, const ConfigOverrides& ov) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), command, ov);
}

ExperimentConfig default_config(const std::string& command) { return parse_config("{}", command); }

std::string serialize_config(const ExperimentConfig& c) {
  json j;
  j["command"] = c.command;
  j["problem"] = c.problem;
  j["degrees"] = c.degrees;
  j["meshes"] = c.meshes;
  json sizes = json::object();
  for (const auto& [p, v] : c.sizes_by_degree) sizes[std::to_string(p)] = v;
  j["sizes_by_degree"] = sizes;
  j["dofs"] = c.dofs;
  j["rules"] = c.rules;
  j["bc"] = c.bc;
  j["modes"] = c.modes;
  j["output"] = c.output;
  j["power"] = c.power;
  j["tau_grid"] = c.tau_grid;
  return j.dump(2) + "\n";
}

}  // namespace igaspec
