#pragma once

#include <stdexcept>
#include <string>

namespace dht {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model or family parameter is outside its admissible range.
class InvalidParameter : public Error {
 public:
  InvalidParameter(std::string field, const std::string& what)
      : Error("invalid parameter '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A family or transform constraint does not hold (e.g. "F5 requires d = 1").
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at u = 0 or u = -A.
class SingularDenominator : public Error {
 public:
  using Error::Error;
};

/// Evaluation point outside a solution's validity domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A closed-form branch hit a pole.
class PoleError : public Error {
 public:
  PoleError(const std::string& what, double where) : Error(what), where_(where) {}
  double where() const noexcept { return where_; }

 private:
  double where_;
};

/// Adaptive integration could not reach the end of the requested span.
class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& what, double last_reached)
      : Error(what), last_reached_(last_reached) {}
  double last_reached() const noexcept { return last_reached_; }

 private:
  double last_reached_;
};

/// The finite-difference solver detected an invalid state.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, double t, double x)
      : Error(what), t_(t), x_(x) {}
  double t() const noexcept { return t_; }
  double x() const noexcept { return x_; }

 private:
  double t_;
  double x_;
};

}  // namespace dht
