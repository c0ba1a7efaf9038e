#pragma once

#include <stdexcept>
#include <string>

namespace idealred {

// Mismatched moduli, bad prime, inconsistent interfaces.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input violates an operation's precondition (bad index, wrong shape, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Desk-scale caps (degree, ambient size, dimension) exceeded.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// |F| is smaller than the number of distinct interpolation points needed.
class FieldTooSmall : public std::runtime_error {
 public:
  FieldTooSmall(unsigned long long required, unsigned long long p)
      : std::runtime_error("field too small: need at least " + std::to_string(required) +
                           " distinct points, prime is " + std::to_string(p)),
        required_(required) {}
  unsigned long long required() const noexcept { return required_; }

 private:
  unsigned long long required_;
};

// Parameter validation refused the run (budgets, vertex bounds, ...).
class ParameterRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Retries exhausted or no nonzero coefficient found.
class IsolationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace idealred
