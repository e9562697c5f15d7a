"""Isogeometric spectral approximation with blended quadrature rules."""

from ._core import (
    ConfigError,
    Error,
    InvalidArgument,
    NumericalError,
    discrete_spectrum,
    dispersion_coefficient,
    exact_spectrum,
    fit_convergence,
    gauss_legendre,
    gauss_lobatto,
    optimal_tau,
    problem_names,
    relative_errors,
    rule,
    run,
    tau_sweep,
)

__all__ = [
    "ConfigError",
    "Error",
    "InvalidArgument",
    "NumericalError",
    "discrete_spectrum",
    "dispersion_coefficient",
    "exact_spectrum",
    "fit_convergence",
    "gauss_legendre",
    "gauss_lobatto",
    "optimal_tau",
    "problem_names",
    "relative_errors",
    "rule",
    "run",
    "tau_sweep",
]
