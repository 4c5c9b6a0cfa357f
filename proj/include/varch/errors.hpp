#pragma once

#include <stdexcept>
#include <string>

namespace varch {

enum class ErrorKind {
  NotPositiveDefinite,
  InvalidDegreesOfFreedom,
  OutOfSupport,
  LengthMismatch,
  TimeIndexOutOfRange,
  ZeroVariance,
  InsufficientDraws,
  AllInitializationsFailed,
  ConstraintViolation,
  ParseError,
  EmptyFile,
  NoDateOverlap,
  UnclassifiedSite,
  MissingCovariate,
  DatasetMismatch,
  FileNotFound,
  ConfigError,
  IoError,
};

const char* error_kind_name(ErrorKind kind);

/// Library-wide exception. `kind()` gives a machine-readable category that
/// the CLI maps onto error JSON and exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  const char* kind_name() const { return error_kind_name(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace varch
