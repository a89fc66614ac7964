#pragma once

#include <stdexcept>
#include <string>

namespace dqd {

// Root of every error the library raises. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape or space mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A matrix failed the density-matrix invariants (Hermitian, unit trace, PSD).
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

// Population of the highest retained Fock level exceeded the guard.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double top_population)
      : Error(what), top_population_(top_population) {}
  double top_population() const noexcept { return top_population_; }

 private:
  double top_population_;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class UndefinedPhaseError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

class AnalysisError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace dqd
