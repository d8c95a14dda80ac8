#pragma once

#include <stdexcept>
#include <string>

namespace memopt {

/// Base of every error raised by the library. `kind()` is the stable,
/// machine-readable tag the CLI prints on failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// A caller broke an operation's precondition (bad rank, negative violation, ...).
class ContractError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "contract"; }
};

/// Dimension or shape mismatch between vectors and a search space.
class StructuralError : public ContractError {
 public:
  using ContractError::ContractError;
  const char* kind() const noexcept override { return "structural"; }
};

/// Invalid user configuration: plan files, parameters, missing data files.
class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config"; }
};

/// Malformed truss model (zero-length bar, bad node reference, missing mass).
class ModelError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "model"; }
};

/// Numerical analysis failure, e.g. a singular reduced stiffness matrix.
class AnalysisError : public Error {
 public:
  AnalysisError(const std::string& what, double pivot = 0.0) : Error(what), pivot_(pivot) {}
  const char* kind() const noexcept override { return "analysis"; }
  double pivot() const noexcept { return pivot_; }

 private:
  double pivot_;
};

/// Objective evaluation produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "evaluation"; }
};

/// A results file could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "parse"; }
};

}  // namespace memopt
