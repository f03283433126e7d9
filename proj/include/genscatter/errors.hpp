#pragma once

#include <stdexcept>
#include <string>

namespace genscatter {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Arguments outside an operation's domain or precondition.
class DomainError : public Error {
public:
  using Error::Error;
};

// Argument sits on a pole of a meromorphic function.
class PoleError : public DomainError {
public:
  using DomainError::DomainError;
};

// Least-squares design without full column rank.
class DegenerateDesign : public DomainError {
public:
  using DomainError::DomainError;
};

// Matrix input violates a structural precondition (unitarity, zero pattern).
class PreconditionViolation : public DomainError {
public:
  using DomainError::DomainError;
};

// Quadrature, integration or matching failed to reach its tolerance.
class NumericalError : public Error {
public:
  using Error::Error;
};

class QuadratureError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class StepFailure : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class IllConditioned : public NumericalError {
public:
  using NumericalError::NumericalError;
};

// Malformed run configuration (cli).
class ConfigError : public Error {
public:
  using Error::Error;
};

// Throws DomainError with `what` when `cond` is false.
void require(bool cond, const std::string &what);

} // namespace genscatter
