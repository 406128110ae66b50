#pragma once

#include <stdexcept>
#include <string>

namespace trapzopt {

// Base for every error the library raises. The CLI maps DomainError to exit
// code 2 and ConfigError to exit code 64.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InfeasibleProfile : public DomainError {
 public:
  using DomainError::DomainError;
};

class EmptyTrajectory : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsupportedMoveType : public DomainError {
 public:
  using DomainError::DomainError;
};

class ZeroLengthSegment : public DomainError {
 public:
  using DomainError::DomainError;
};

class ParamCountMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

class LimitViolation : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateRange : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidImprovement : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoFeasiblePoint : public DomainError {
 public:
  using DomainError::DomainError;
};

class BadConfig : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace trapzopt
