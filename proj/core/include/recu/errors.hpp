#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace recu {

/// Incompatible dimensions between layers, networks or inputs.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bad user-facing parameters (radius <= 0, m < n+k+1, unknown target, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A network construction whose preconditions failed at build time, e.g. a
/// product factor whose range escapes the product gadget's exact domain.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed serialized network. `location()` is either "byte N" for syntax
/// errors or a JSON pointer such as "/layers/0/A/1/2" for schema errors.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::string location)
      : std::runtime_error(what + " (at " + location + ")"), location_(std::move(location)) {}

  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

}  // namespace recu
