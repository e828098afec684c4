#pragma once

#include <stdexcept>
#include <string>

namespace mwo {

// Violated precondition or invalid input. The CLI maps these to exit code 2
// when they surface during config validation.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation that was started but could not produce a trustworthy result
// (non-convergence, failed consistency check). Exit code 3 in the CLI.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mwo
