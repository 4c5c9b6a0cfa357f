#include "varch/errors.hpp"

namespace varch {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::InvalidDegreesOfFreedom: return "InvalidDegreesOfFreedom";
    case ErrorKind::OutOfSupport: return "OutOfSupport";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::TimeIndexOutOfRange: return "TimeIndexOutOfRange";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::InsufficientDraws: return "InsufficientDraws";
    case ErrorKind::AllInitializationsFailed: return "AllInitializationsFailed";
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptyFile: return "EmptyFile";
    case ErrorKind::NoDateOverlap: return "NoDateOverlap";
    case ErrorKind::UnclassifiedSite: return "UnclassifiedSite";
    case ErrorKind::MissingCovariate: return "MissingCovariate";
    case ErrorKind::DatasetMismatch: return "DatasetMismatch";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace varch
