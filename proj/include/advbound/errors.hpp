#pragma once

#include <stdexcept>
#include <string>

namespace advbound {

// Argument outside the mathematical domain of an operation (NaN input,
// quantile of 0 or 1, negative radius, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A theorem hypothesis is violated (f_c > 1/2, invalid regime requested).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The requested combination is not supported (e.g. a set/metric pair with no
// closed-form distance).
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace advbound
