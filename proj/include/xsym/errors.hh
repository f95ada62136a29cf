#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

// Invalid arguments are reported with std::invalid_argument. The types below
// cover the remaining failure classes; the CLI maps DataError to exit code 2
// and NumericalError (with its subclasses) to exit code 3.
namespace xsym {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model evaluates to a non-positive normalization or hemisphere yield.
class DegenerateModel : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Not enough usable data for the requested estimate.
class Underdetermined : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Input file problem; line is 1-based, 0 when not tied to a line.
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace xsym
