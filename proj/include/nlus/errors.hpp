#pragma once

#include <stdexcept>
#include <string>

namespace nlus {

/// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a law or operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a point where the value or slope is unbounded.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// No physical solution exists for the requested state.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Integrator/solver failure or broken numerical invariant.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration; carries the dotted path of the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace nlus
