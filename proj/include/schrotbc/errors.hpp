#pragma once

#include <stdexcept>
#include <string>

namespace schrotbc {

/// Caller broke a precondition (shape mismatch, invalid argument).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A numerical procedure failed (pole, singular factorization, no convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The evolving field blew up or became non-finite.
class InstabilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Malformed run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractViolation(what);
}

}  // namespace schrotbc
