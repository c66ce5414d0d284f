#pragma once

#include <stdexcept>
#include <string>

namespace bcf {

// Raised when a matrix is not invertible over the ring it is used in.
class InvalidGroupElement : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when 3 (or another required element) is not a unit mod N.
class UnsupportedRing : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Precondition failures: wrong prime, inverse of a non-unit, empty input.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A computation would exceed the configured enumeration cap.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An input function violates a required invariance; the message names a witness.
class ContractViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bcf
