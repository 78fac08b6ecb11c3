#pragma once

#include <stdexcept>
#include <string>

namespace ridgelet {

/// Argument outside the mathematical domain of an operation (poles, k >= n, t <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A quadrature or tail integral that does not settle.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input does not satisfy a documented precondition (admissibility, majorant, ...).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two independent evaluation routes disagree beyond tolerance.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested lattice space has no implemented associate norm.
class UnsupportedSpace : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ridgelet
