#pragma once

#include <stdexcept>
#include <string>

namespace sntp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid inputs or configuration.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A coordinate fell below the representable floor (1e-300) or became non-finite.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Requested utility level is outside the range of the utility family.
class UnreachableUtility : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Rejection or hit-and-run sampling exhausted its attempt budget.
class SamplingError : public Error {
 public:
  using Error::Error;
};

class LpError : public Error {
 public:
  using Error::Error;
};

}  // namespace sntp
