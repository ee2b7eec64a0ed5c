#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace lapstrip {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or point outside the domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

class PoleError : public Error {
public:
  PoleError(const std::string& what, std::complex<double> where,
            std::optional<std::complex<double>> residue = std::nullopt)
      : Error(what), location(where), residue(residue) {}
  std::complex<double> location;
  std::optional<std::complex<double>> residue;
};

class DivergenceError : public Error {
public:
  using Error::Error;
};

// Evaluation budget ran out; carries whatever was accumulated.
class BudgetExceeded : public Error {
public:
  BudgetExceeded(const std::string& what, std::complex<double> partial,
                 double err, long evals)
      : Error(what), partial_value(partial), partial_error(err),
        evaluations(evals) {}
  std::complex<double> partial_value;
  double partial_error;
  long evaluations;
};

// Integrand produced inf or nan.
class NonFiniteError : public Error {
public:
  using Error::Error;
};

class InconclusiveError : public Error {
public:
  using Error::Error;
};

class HypothesisViolated : public Error {
public:
  using Error::Error;
};

class UnsupportedError : public Error {
public:
  using Error::Error;
};

class NearSingularityError : public Error {
public:
  using Error::Error;
};

class BadRadiusError : public Error {
public:
  using Error::Error;
};

class InternalError : public Error {
public:
  using Error::Error;
};

} // namespace lapstrip
