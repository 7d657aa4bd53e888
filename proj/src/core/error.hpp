#pragma once

#include <stdexcept>
#include <string>

namespace sqkd {

enum class ErrorCode {
  InvalidArgument,
  TruncationTooSmall,
  DimensionMismatch,
  GridTooNarrow,
  NotCoprime,
  NonRealResult,
  RegimeViolation,
  TooFewSamples,
  EveBelowVacuum,
  ReconciliationFailure,
  ConfigError,
  ValidationFailure,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::GridTooNarrow: return "GridTooNarrow";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::NonRealResult: return "NonRealResult";
    case ErrorCode::RegimeViolation: return "RegimeViolation";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::EveBelowVacuum: return "EveBelowVacuum";
    case ErrorCode::ReconciliationFailure: return "ReconciliationFailure";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ValidationFailure: return "ValidationFailure";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace sqkd
