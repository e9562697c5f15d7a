#include <doctest.h>

#include <cmath>
#include <numbers>

#include "igaspec/analysis.hpp"

using namespace igaspec;

namespace {

constexpr Real pi = std::numbers::pi_v<Real>;
constexpr Real pi2 = pi * pi;

bool near(Real a, Real b, Real rel) { return std::abs(a - b) <= rel * std::abs(b); }

}  // namespace

TEST_CASE("exact spectra") {
  const auto neu = model_problem("laplace_neumann_1d");
  CHECK(near(neu.exact_eigenvalue(2), 4 * pi2, 1e-18L));
  CHECK(neu.has_zero_mode());
  const auto dir = model_problem("laplace_dirichlet_1d");
  CHECK(near(dir.exact_eigenvalue(3), 9 * pi2, 1e-18L));

  const auto cube = model_problem("laplace_dirichlet_3d");
  const auto s = exact_spectrum(cube, 20);
  CHECK(near(s[0], 3 * pi2, 1e-18L));
  CHECK(near(s[1], 6 * pi2, 1e-18L));
  CHECK(near(s[9], 11 * pi2, 1e-18L));
  CHECK(near(s[15], 14 * pi2, 1e-18L));
  CHECK(cube.multiplicity(2) == 3);
  CHECK(cube.multiplicity(1) == 1);
  CHECK(cube.multiplicity(16) == 6);  // permutations of (1, 2, 3)
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] >= s[i - 1]);

  const auto pt = model_problem("schrodinger_poschl_teller");
  CHECK(near(pt.exact_eigenvalue(1), 16, 1e-18L));
  CHECK(near(pt.exact_eigenvalue(2), 36, 1e-18L));
  CHECK(near(pt.exact_eigenvalue(4), 100, 1e-18L));
  CHECK(std::isinf(pt.gamma(0)));
  CHECK(near(pt.gamma(pi / 4), 8, 1e-17L));

  CHECK_THROWS_AS(model_problem("heat"), InvalidArgument);
  CHECK_THROWS_AS(neu.exact_eigenvalue(0), InvalidArgument);
}

TEST_CASE("exact eigenfunctions are normalized and solve the equation") {
  for (const char* name : {"laplace_neumann_1d", "laplace_dirichlet_1d", "schrodinger_poschl_teller"}) {
    const auto pr = model_problem(name);
    for (int j : {1, 2, 4}) {
      const Real a = pr.lower, b = pr.upper;
      // Midpoint rule on a fine grid; the functions are smooth.
      const int n = 4000;
      Real norm = 0;
      for (int i = 0; i < n; ++i) {
        const Real x = a + (i + Real(0.5)) * (b - a) / n;
        norm += pr.exact_eigenfunction(j, x) * pr.exact_eigenfunction(j, x) * (b - a) / n;
      }
      CHECK(near(norm, 1, 1e-5L));
      // -u'' + gamma u = lambda u at an interior point.
      const Real x = a + Real(0.37) * (b - a);
      const Real e = 1e-4L;
      const Real upp = (pr.exact_eigenfunction(j, x + e) - 2 * pr.exact_eigenfunction(j, x) +
                        pr.exact_eigenfunction(j, x - e)) /
                       (e * e);
      const Real u = pr.exact_eigenfunction(j, x);
      CHECK(std::abs(-upp + pr.gamma(x) * u - pr.exact_eigenvalue(j) * u) < 1e-5L * pr.exact_eigenvalue(j));
    }
  }
}

TEST_CASE("relative error signs for G3 and L3") {
  const auto pr = model_problem("laplace_neumann_1d");
  const int n = 32;
  const Real big_lambda = pi / n;
  const Real g = relative_errors(discrete_spectrum(pr, 2, n, RuleSpec::single("G3")), pr, {1}).front();
  const Real l = relative_errors(discrete_spectrum(pr, 2, n, RuleSpec::single("L3")), pr, {1}).front();
  CHECK(g > 0);
  CHECK(l < 0);
  CHECK(near(g, std::pow(big_lambda, 4) / 720, 0.02L));
  CHECK(near(l, -std::pow(big_lambda, 4) / 1440, 0.02L));
}

TEST_CASE("relative errors of an exact match vanish") {
  const auto pr = model_problem("laplace_dirichlet_1d");
  Spectrum<Real> s;
  s.eigenvalues = exact_spectrum(pr, 5);
  for (Real e : relative_errors(s, pr, {1, 3, 5})) CHECK(e == 0);
  CHECK_THROWS_AS(relative_errors(s, pr, {6}), InvalidArgument);
  CHECK_THROWS_AS(relative_errors(s, pr, {0}), InvalidArgument);
}

TEST_CASE("Neumann spectra carry a zero mode that is not compared") {
  const auto pr = model_problem("laplace_neumann_1d");
  const auto s = discrete_spectrum(pr, 2, 8, RuleSpec::gauss(2));
  CHECK(s.size() == 10);
  CHECK(std::abs(s.eigenvalues[0]) < 1e-12L);
  CHECK(comparable_modes(pr, s) == 9);
  CHECK(near(s.eigenvalues[1], pi2, 1e-3L));
}

TEST_CASE("fit_convergence") {
  const Real h = 0.1L;
  const auto r = fit_convergence({{h, std::pow(h, 4)}, {h / 2, std::pow(h / 2, 4)}});
  REQUIRE(r.fitted_slope);
  CHECK(near(*r.fitted_slope, 4, 1e-15L));
  CHECK(r.pairwise_slopes.size() == 1);

  const auto single = fit_convergence({{h, 1e-3L}});
  CHECK_FALSE(single.fitted_slope);
  CHECK_FALSE(single.warnings.empty());

  const auto exact_hit = fit_convergence({{h, 0}, {h / 2, 1e-4L}, {h / 4, 1e-5L}});
  CHECK(exact_hit.fitted_slope);
  CHECK_FALSE(exact_hit.warnings.empty());

  // Reference Schrodinger Gauss columns for mode 1.
  const auto p1 = fit_convergence({{1.0L / 40, 3.19e-3L}, {1.0L / 80, 7.41e-4L}, {1.0L / 160, 1.78e-4L}});
  CHECK(std::abs(*p1.fitted_slope - 2.08L) < 0.01L);
  const auto p2 = fit_convergence({{1.0L / 10, 1.63e-3L}, {1.0L / 20, 7.94e-5L}, {1.0L / 40, 4.62e-6L}});
  CHECK(std::abs(*p2.fitted_slope - 4.23L) < 0.01L);
}

TEST_CASE("dispersion coefficients") {
  const auto pr = model_problem("laplace_neumann_1d");
  const auto g = dispersion_coefficient(pr, 2, RuleSpec::gauss(2), 4);
  CHECK(g.power == 4);
  CHECK(g.converged);
  CHECK(near(g.coefficient, 1.0L / 720, 0.01L));
  // tau weights L3 in the quadratic pair: tau = 0 is G3, tau = 1 is L3.
  const auto zero = dispersion_coefficient(pr, 2, RuleSpec::degree_pair(2, 0), 4);
  CHECK(near(zero.coefficient, g.coefficient, 1e-12L));
  const auto one = dispersion_coefficient(pr, 2, RuleSpec::degree_pair(2, 1), 4);
  CHECK(near(one.coefficient, -1.0L / 1440, 0.01L));
  const auto o6 = dispersion_coefficient(pr, 2, RuleSpec::optimal(2), 6);
  CHECK(near(o6.coefficient, 11.0L / 60480, 0.05L));
  CHECK_THROWS_AS(dispersion_coefficient(pr, 2, RuleSpec::gauss(2), 4, {32}), InvalidArgument);
}

TEST_CASE("linear blends follow the closed-form dispersion relation") {
  // Dirichlet p=1: K and M are Toeplitz on interior nodes, so sin modes are
  // exact eigenvectors and lambda h^2 = 2(1 - c) / (1 - tau (1 - c) / 3),
  // c = cos(k pi h). Expanding gives a leading error (2 tau - 1) Lambda^2 / 12.
  const auto pr = model_problem("laplace_dirichlet_1d");
  const int n = 16;
  const Real h = Real(1) / n;
  for (Real tau : {Real(0), Real(0.3), Real(0.5), Real(1)}) {
    const auto s = discrete_spectrum(pr, 1, n, RuleSpec::degree_pair(1, tau));
    for (int k = 1; k < n; ++k) {
      const Real c = std::cos(k * pi * h);
      const Real expected = 2 * (1 - c) / (1 - tau * (1 - c) / 3) / (h * h);
      CHECK(near(s.eigenvalues[static_cast<std::size_t>(k - 1)], expected, 1e-15L));
    }
  }
  const auto sweep = tau_sweep(1, {0, 0.25L, 0.75L, 1});
  CHECK(std::abs(sweep.tau_star - 0.5L) < 1e-3L);
}

TEST_CASE("tau sweep recovers the quadratic optimum") {
  const auto r = tau_sweep(2, {0, 0.5L, 1});
  CHECK(r.power == 4);
  CHECK(std::abs(r.tau_star - 2.0L / 3) < 1e-3L);
  CHECK(r.bracket[0] <= r.tau_star);
  CHECK(r.bracket[1] >= r.tau_star);
  CHECK_THROWS_AS(tau_sweep(2, {0.8L, 1}), NumericalError);
  CHECK_THROWS_AS(tau_sweep(2, {0.5L}), InvalidArgument);
}

TEST_CASE("optimal linear blend raises the convergence order") {
  const auto pr = model_problem("laplace_neumann_1d");
  for (int mode : {2, 4}) {
    std::vector<std::pair<Real, Real>> g, o;
    for (int n : {32, 64, 128}) {
      g.emplace_back(Real(1) / n, relative_errors(discrete_spectrum(pr, 1, n, RuleSpec::gauss(1)), pr, {mode})[0]);
      o.emplace_back(Real(1) / n, relative_errors(discrete_spectrum(pr, 1, n, RuleSpec::optimal(1)), pr, {mode})[0]);
    }
    CHECK(std::abs(*fit_convergence(g).fitted_slope - 2) < 0.05L);
    CHECK(*fit_convergence(o).fitted_slope >= 3.9L);
  }
}

TEST_CASE("eigenfunction L2 errors") {
  const auto pr = model_problem("laplace_dirichlet_1d");
  const auto s10 = discrete_spectrum(pr, 2, 10, RuleSpec::gauss(2), true);
  const auto s20 = discrete_spectrum(pr, 2, 20, RuleSpec::gauss(2), true);
  const Real e10 = eigenfunction_l2_error(s10, pr, 1, problem_space(pr, 2, 10));
  const Real e20 = eigenfunction_l2_error(s20, pr, 1, problem_space(pr, 2, 20));
  CHECK(e10 / e20 == doctest::Approx(8).epsilon(0.05));

  auto flipped = s10;
  for (std::size_t i = 0; i < flipped.eigenvectors->rows(); ++i) (*flipped.eigenvectors)(i, 0) *= -1;
  CHECK(eigenfunction_l2_error(flipped, pr, 1, problem_space(pr, 2, 10)) == doctest::Approx(static_cast<double>(e10)));

  const auto no_vectors = discrete_spectrum(pr, 2, 10, RuleSpec::gauss(2));
  CHECK_THROWS_AS(eigenfunction_l2_error(no_vectors, pr, 1, problem_space(pr, 2, 10)), InvalidArgument);
}

TEST_CASE("3D spectra through the tensor route") {
  const auto pr = model_problem("laplace_dirichlet_3d");
  const auto s = discrete_spectrum(pr, 2, 8, RuleSpec::gauss(2));
  CHECK(s.size() == 8u * 8u * 8u);
  const auto e = relative_errors(s, pr, {1, 2, 10, 16});
  for (Real v : e) CHECK(v > 0);
  CHECK(s.tensor_indices[0] == std::array<int, 3>{1, 1, 1});
  CHECK_THROWS_AS(discrete_spectrum(pr, 2, 8, RuleSpec::gauss(2), true), InvalidArgument);
}

TEST_CASE("mesh helpers") {
  CHECK(schrodinger_elements(40) == 20);
  CHECK(schrodinger_elements(10) == 5);
  CHECK_THROWS_AS(schrodinger_elements(15), InvalidArgument);
  CHECK(elements_for_dofs(model_problem("laplace_neumann_1d"), 2, 1000) == 998);
  CHECK(elements_for_dofs(model_problem("laplace_dirichlet_1d"), 2, 1000) == 1000);
  CHECK_THROWS_AS(elements_for_dofs(model_problem("laplace_neumann_1d"), 3, 3), InvalidArgument);
}

TEST_CASE("rule specifications") {
  CHECK(RuleSpec::gauss(2).canonical() == "G3");
  CHECK(RuleSpec::optimal(2).is_blend());
  CHECK(RuleSpec::optimal(2).rule_a == "L3");
  CHECK(RuleSpec::optimal(3).tau == -1.5L);
  CHECK(RuleSpec::gauss_gauss(1, 2).rule_b == "G1");
  CHECK_THROWS_AS(named_rule<Real>("Q3"), InvalidArgument);
  CHECK_THROWS_AS(named_rule<Real>("G3x"), InvalidArgument);
  const auto r = RuleSpec::optimal(2).build<double>();
  CHECK(r.size() == 5);
}

TEST_CASE("Lobatto nodes hit the Schrodinger singularity") {
  const auto pr = model_problem("schrodinger_poschl_teller");
  CHECK_THROWS_AS(discrete_spectrum(pr, 2, 10, RuleSpec::lobatto(2)), SingularCoefficientError);
  CHECK_NOTHROW(discrete_spectrum(pr, 2, 10, RuleSpec::gauss_gauss(2, 2)));
}
