#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tradedfa {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input row. `line()` is 1-based and counts the header.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Timestamps or dates going backwards.
class OrderingError : public Error {
 public:
  OrderingError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A parameter (box size, degree, fit range, ...) is outside its valid domain.
class RangeError : public Error {
 public:
  using Error::Error;
};

// The data cannot support the requested computation, e.g. a duration falls in
// an intraday bin with no defined pattern value.
class DataError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Numerically singular least-squares problem.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace tradedfa
