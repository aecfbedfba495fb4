#pragma once

#include <stdexcept>
#include <string>

namespace gbsc {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point or parameter lies outside the domain an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Evaluation requested on the singular set of a phase function.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// Beam ODE integration could not continue (Im M lost definiteness, budget exceeded, ...).
class IntegrationError : public Error {
 public:
  using Error::Error;
};

class DegenerateSlownessError : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

// Index set that is not downward closed.
class StructureError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace gbsc
