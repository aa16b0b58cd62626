#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ordinal {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter errors: the caller asked for something outside the supported domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};
class RangeError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};
class OrderError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};
class OrderMismatch : public ParameterError {
 public:
  using ParameterError::ParameterError;
};
class SpecError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// Data errors: the input series or file cannot be used as given.
class DataError : public Error {
 public:
  using Error::Error;
};
class ValueError : public DataError {
 public:
  using DataError::DataError;
};
class LengthError : public DataError {
 public:
  using DataError::DataError;
};
class TieError : public DataError {
 public:
  using DataError::DataError;
};
class EmptyError : public DataError {
 public:
  using DataError::DataError;
};
class IOError : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Numerical errors: the computation is undefined for the given inputs.
class NumericalError : public Error {
 public:
  using Error::Error;
};
class SupportError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace ordinal
