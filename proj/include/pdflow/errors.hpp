#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdflow {

/// Rejected input: malformed diagram text, invalid parameters, unbalanced
/// networks. `line()` is 1-based when the error comes from a text file, else 0.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An exact reference computation was asked to work on an input larger than it
/// is allowed to materialize.
class SizeGuardError : public InputError {
 public:
  using InputError::InputError;
};

/// The min-cost flow solver ended in a state that does not describe a feasible
/// flow of the real network.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pdflow
