#pragma once

#include <stdexcept>
#include <string>

namespace closedexact {

/// Malformed textual input (files, command-line values).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace closedexact
