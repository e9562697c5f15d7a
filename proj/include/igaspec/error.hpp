#pragma once

#include <stdexcept>
#include <string>

namespace igaspec {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad mesh, bad degree, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Base for failures of the numerical pipeline itself.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The reaction coefficient evaluated to a non-finite value at a quadrature node.
class SingularCoefficientError : public NumericalError {
 public:
  SingularCoefficientError(std::string what, int element, double node)
      : NumericalError(std::move(what)), element_(element), node_(node) {}

  int element() const noexcept { return element_; }
  double node() const noexcept { return node_; }

 private:
  int element_;
  double node_;
};

/// Cholesky factorization of a matrix that should be SPD broke down.
class NotPositiveDefiniteError : public NumericalError {
 public:
  NotPositiveDefiniteError(std::string what, std::size_t pivot)
      : NumericalError(std::move(what)), pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

/// An exact eigenvalue is degenerate and a per-mode comparison is ill-defined.
class MultiplicityError : public Error {
 public:
  using Error::Error;
};

/// No built-in optimal blending parameter exists for the requested degree.
class NoBuiltinOptimum : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Invalid experiment configuration; carries the offending field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace igaspec
