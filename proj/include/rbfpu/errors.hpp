#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rbfpu {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (dimension mismatch, empty sets, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (search grid, domain spec, covering parameters).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A query point lies in no subdomain.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// No feasible local fit exists for a subdomain.
class PatchFitError : public Error {
 public:
  using Error::Error;
};

/// The data distribution defeats the radius growth rule.
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

class FileError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace rbfpu
