#pragma once

#include <stdexcept>
#include <string>

namespace bhblow {

/// Base for every error raised by the library. `exit_code()` is what the CLI
/// returns when the error escapes a subcommand.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 4; }
};

/// Invalid argument or violated precondition on an input value.
class ParameterError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Non-finite input or intermediate value.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The grid cannot represent the requested quantity.
class ResolutionError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// Adaptive quadrature did not reach its tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double estimate)
      : Error(what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

/// A checked mathematical bound does not hold.
class VerificationError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration file.
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bhblow
