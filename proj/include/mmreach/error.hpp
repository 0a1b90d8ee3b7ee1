#pragma once

#include <stdexcept>
#include <string>

namespace mmreach {

// Base for every error raised by the library. Callers that only care about
// "something was wrong with the input" can catch this one type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Vector lengths or system dimensions disagree.
struct DimensionError : Error {
  using Error::Error;
};

// An argument is outside the ordered sets the operation is defined on,
// e.g. a decomposition evaluated off T or rect() of an unordered pair.
struct OrderViolationError : Error {
  using Error::Error;
};

// Finite values were required but an infinite bound was supplied.
struct UnboundedDomainError : Error {
  using Error::Error;
};

// Numeric domain error during expression evaluation (division by zero).
struct DomainError : Error {
  using Error::Error;
};

// A documented precondition does not hold (e.g. the backward-transform hypothesis).
struct PreconditionError : Error {
  using Error::Error;
};

// Lookup of a built-in system or closed form by an unregistered name.
struct UnknownNameError : Error {
  using Error::Error;
};

// Malformed configuration that is not an expression syntax error.
struct ConfigError : Error {
  using Error::Error;
};

// Expression or configuration syntax error. `field` names the JSON location
// ("field[1]", "decomposition[0]", ...) when known; `column` is 1-based.
struct ParseError : Error {
  ParseError(std::string message, std::string field_name, int col)
      : Error(format(message, field_name, col)), field(std::move(field_name)), column(col) {}

  std::string field;
  int column = 0;

 private:
  static std::string format(const std::string& message, const std::string& field_name, int col) {
    std::string out;
    if (!field_name.empty()) out += field_name + ": ";
    if (col > 0) out += "column " + std::to_string(col) + ": ";
    return out + message;
  }
};

}  // namespace mmreach
