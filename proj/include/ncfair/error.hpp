#pragma once

#include <stdexcept>
#include <string>

namespace ncfair {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad configuration, missing files, malformed schemas or rule files.
/// CLI maps these to exit code 2.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Input text that does not parse (CSV cells, rule files). Carries a
/// human-readable location in the message.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Schema violations: unknown columns, kind mismatches, duplicate names.
class SchemaError : public Error {
public:
  using Error::Error;
};

/// A conditional rate whose conditioning event is empty. Never silently
/// reported as 0 or NaN.
class UndefinedRateError : public Error {
public:
  using Error::Error;
};

/// Vector/matrix dimension mismatches.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Not enough rows/values to carry out a computation.
class InsufficientDataError : public Error {
public:
  using Error::Error;
};

}  // namespace ncfair
