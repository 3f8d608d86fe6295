#pragma once

#include <stdexcept>
#include <string>

namespace mvc {

// Base of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated an operation's precondition (bad sizes, duplicate points, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Mathematically undefined request, e.g. inverting zero.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Not enough evaluations to interpolate.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Parameters are valid but do not fit the implementation limits
// (evaluation-point budget, supported parameter families).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// An exhaustive enumeration would exceed its hard budget.
class BudgetExceededError : public Error {
 public:
  BudgetExceededError(const std::string& what, double estimate)
      : Error(what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

// A decoder found no recoverable version at or after the latest common
// version: the allocation table behind the code is broken.
class CodeInfeasibleError : public Error {
 public:
  using Error::Error;
};

// An internal algorithm contract was falsified by the supplied code
// (auxiliary-tuple invariants, simulator decode guarantees).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace mvc
