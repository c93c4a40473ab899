#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace robgxe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A distribution parameter outside its support (non-positive rate, NaN mean, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or user input (bad settings, out-of-range indices).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A sampler produced a non-finite intermediate quantity.
class GuardError : public Error {
 public:
  using Error::Error;
};

/// A statistic is undefined for the given input (zero variance, one-class truth, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. Row and column are 1-based; column 0 means "whole row".
class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t row, std::size_t col, const std::string& what)
      : Error(path + ":" + std::to_string(row) + ":" + std::to_string(col) + ": " + what),
        row_(row),
        col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

}  // namespace robgxe
