#pragma once

#include <stdexcept>
#include <string>

namespace perfectmap {

// Malformed input text; line is 1-based within the stream being parsed.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// An instance exceeds a desk-scale size guard.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solver failed to terminate cleanly (iteration cap, non-finite values).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace perfectmap
