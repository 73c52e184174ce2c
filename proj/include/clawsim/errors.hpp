// errors.hpp — exception types shared across the library.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clawsim {

// An oracle operation was invoked under the wrong oracle mode.
struct ModeError : std::logic_error {
  using std::logic_error::logic_error;
};

// Deserialization failed; `position` is the byte offset of the failure.
struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what), position(pos) {}
};

// A simulation exceeded its configured state or edge budget.
struct SizeCapError : std::length_error {
  using std::length_error::length_error;
};

// No candidate walk constant reached the target success rate.
struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scaling-fit input was degenerate (too few rows or too narrow a span).
struct FitError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace clawsim
