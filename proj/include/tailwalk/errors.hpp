// errors.hpp — exception types shared by all modules.
#pragma once

#include <stdexcept>
#include <string>

namespace tailwalk {

// Bad user input: malformed files, out-of-range parameters. CLI exit code 2.
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Parse failure in a graph file; carries the 1-based line number.
class ParseError : public InputError {
  public:
    ParseError(int line, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

// Runtime numerical failure (eigensolver, iteration cap, inconsistent spectrum). CLI exit code 1.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Tail truncation could not reach the leakage tolerance. CLI exit code 1.
class TruncationError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

}  // namespace tailwalk
