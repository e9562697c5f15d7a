#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "igaspec/analysis.hpp"
#include "igaspec/config.hpp"
#include "igaspec/error.hpp"
#include "igaspec/experiments.hpp"

namespace py = pybind11;
using igaspec::Real;

namespace {

std::vector<double> to_double(const std::vector<Real>& v) { return {v.begin(), v.end()}; }

py::dict rule_dict(const igaspec::QuadratureRule<Real>& r) {
  py::dict d;
  d["name"] = r.name;
  d["nodes"] = to_double(r.nodes);
  d["weights"] = to_double(r.weights);
  d["exactness_degree"] = r.exactness_degree;
  return d;
}

std::vector<double> discrete_spectrum(const std::string& problem, int p, int n, const std::string& rule) {
  const auto pr = igaspec::model_problem(problem);
  return to_double(igaspec::discrete_spectrum(pr, p, n, igaspec::resolve_rule(rule, p)).eigenvalues);
}

std::vector<double> relative_errors(const std::string& problem, int p, int n, const std::string& rule,
                                    const std::vector<int>& modes) {
  const auto pr = igaspec::model_problem(problem);
  const auto s = igaspec::discrete_spectrum(pr, p, n, igaspec::resolve_rule(rule, p));
  return to_double(igaspec::relative_errors(s, pr, modes));
}

py::dict dispersion(const std::string& problem, int p, const std::string& rule, int power, std::vector<int> meshes) {
  const auto e = igaspec::dispersion_coefficient(igaspec::model_problem(problem), p, igaspec::resolve_rule(rule, p),
                                                 power, std::move(meshes));
  py::dict d;
  d["power"] = e.power;
  d["coefficient"] = static_cast<double>(e.coefficient);
  d["meshes"] = e.meshes;
  d["raw_coefficients"] = to_double(e.raw_coefficients);
  d["converged"] = e.converged;
  d["rule"] = e.rule;
  return d;
}

py::dict tau_sweep(int p, const std::vector<double>& grid, const std::string& pair, const std::string& problem) {
  if (pair != "gauss_lobatto" && pair != "gauss_gauss")
    throw igaspec::InvalidArgument("pair must be 'gauss_lobatto' or 'gauss_gauss'");
  const auto r = igaspec::tau_sweep(p, std::vector<Real>(grid.begin(), grid.end()),
                                    pair == "gauss_gauss" ? igaspec::BlendPair::gauss_gauss
                                                          : igaspec::BlendPair::gauss_lobatto,
                                    {}, problem);
  py::dict d;
  d["p"] = r.p;
  d["power"] = r.power;
  d["taus"] = to_double(r.taus);
  d["coefficients"] = to_double(r.coefficients);
  d["tau_star"] = static_cast<double>(r.tau_star);
  d["bracket"] = std::vector<double>{static_cast<double>(r.bracket[0]), static_cast<double>(r.bracket[1])};
  return d;
}

py::dict fit(const std::vector<std::pair<double, double>>& points) {
  const auto r = igaspec::fit_convergence(std::vector<std::pair<Real, Real>>(points.begin(), points.end()));
  py::dict d;
  d["slope"] = r.fitted_slope ? py::cast(static_cast<double>(*r.fitted_slope)) : py::none();
  d["pairwise_slopes"] = to_double(r.pairwise_slopes);
  d["warnings"] = r.warnings;
  return d;
}

std::vector<std::string> run(const std::string& command, const std::string& config_json, py::object out) {
  igaspec::ConfigOverrides o;
  if (!out.is_none()) o.out = py::str(out).cast<std::string>();
  return igaspec::run_command(igaspec::parse_config(config_json, command, o)).files;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Isogeometric spectral approximation with blended quadrature";

  auto base = py::register_exception<igaspec::Error>(m, "Error");
  py::register_exception<igaspec::ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<igaspec::NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<igaspec::InvalidArgument>(m, "InvalidArgument", base.ptr());

  m.def("gauss_legendre", [](int m_) { return rule_dict(igaspec::gauss_legendre<Real>(m_)); }, py::arg("m"));
  m.def("gauss_lobatto", [](int m_) { return rule_dict(igaspec::gauss_lobatto<Real>(m_)); }, py::arg("m"));
  m.def("rule", [](const std::string& keyword, int p) { return rule_dict(igaspec::resolve_rule(keyword, p).build<Real>()); },
        py::arg("keyword"), py::arg("p"), "Merged nodes and weights of a rule keyword for degree p");
  m.def("optimal_tau", [](int p) { return static_cast<double>(igaspec::optimal_tau<Real>(p)); }, py::arg("p"));

  m.def("problem_names", &igaspec::model_problem_names);
  m.def("exact_spectrum",
        [](const std::string& problem, int count) {
          return to_double(igaspec::exact_spectrum(igaspec::model_problem(problem), count));
        },
        py::arg("problem"), py::arg("count"));
  m.def("discrete_spectrum", &discrete_spectrum, py::arg("problem"), py::arg("p"), py::arg("n_elements"),
        py::arg("rule") = "gauss");
  m.def("relative_errors", &relative_errors, py::arg("problem"), py::arg("p"), py::arg("n_elements"),
        py::arg("rule"), py::arg("modes"));
  m.def("dispersion_coefficient", &dispersion, py::arg("problem"), py::arg("p"), py::arg("rule"), py::arg("power"),
        py::arg("meshes") = std::vector<int>{});
  m.def("tau_sweep", &tau_sweep, py::arg("p"), py::arg("grid"), py::arg("pair") = "gauss_lobatto",
        py::arg("problem") = "laplace_dirichlet_1d");
  m.def("fit_convergence", &fit, py::arg("points"));
  m.def("run", &run, py::arg("command"), py::arg("config_json") = "{}", py::arg("out") = py::none(),
        "Runs an experiment command and returns the files written");
}
