#pragma once

#include <stdexcept>
#include <string>

namespace lacunar {

// Input violates a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical contract (tolerance, precision, budget) could not be met.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lacunar
