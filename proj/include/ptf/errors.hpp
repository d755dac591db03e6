#pragma once
#include <stdexcept>

namespace ptf {

// An argument violates an operation's contract (bad dimension, bad range,
// malformed file, unknown constant name, ...).
struct InvalidInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Structurally valid input the operation cannot act on, e.g. a constant
// polynomial where positive variance is required.
struct DegenerateInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A computation would exceed a configured size limit or overflow exact
// integer arithmetic.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Internal consistency failure. Indicates a bug, not a caller error.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace ptf
