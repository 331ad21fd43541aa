#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace antilinear {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: invalid grid, non-finite or non-positive coefficient, missing derivative.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Expression syntax error. `offset` is the byte offset into the source text.
class ParseError : public InputError {
 public:
  ParseError(std::size_t offset, std::string expected, const std::string& message)
      : InputError("parse error at offset " + std::to_string(offset) + ": " + message),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

/// Raised by a solver once the state stops being finite or a structural condition fails.
class SolverError : public Error {
 public:
  explicit SolverError(const std::string& message, std::optional<double> where = std::nullopt)
      : Error(where ? message + " (first at x = " + std::to_string(*where) + ")" : message),
        where_(where) {}

  std::optional<double> where() const noexcept { return where_; }

 private:
  std::optional<double> where_;
};

/// The forced Z+/Z- route was asked to solve data violating g2 = i conj(g1), u2(0) = i conj(u1(0)).
class CompatibilityError : public SolverError {
 public:
  CompatibilityError(const std::string& message, double deviation)
      : SolverError(message), deviation_(deviation) {}

  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

}  // namespace antilinear
