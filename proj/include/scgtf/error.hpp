#pragma once

#include <stdexcept>
#include <string>

namespace scgtf {

// Precondition violated by a caller-supplied argument.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Not enough usable data to produce a result (e.g. no ridge points).
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs are individually valid but inconsistent with each other.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace scgtf
