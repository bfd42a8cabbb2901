#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmaplab {

enum class ErrorCode {
  InvalidArgument,
  NotRanked,
  DegenerateTail,
  DegenerateTheta,
  MalformedCode,
  TooLarge,
  WeightMismatch,
  InconsistentOrder,
  OutOfRange,
  HeightTie,
  SpineMismatch,
  NonBridge,
  UnknownVertex,
  NonpositiveScale,
  EmptySample,
  SupportMismatch,
  ConfigError,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotRanked: return "NotRanked";
    case ErrorCode::DegenerateTail: return "DegenerateTail";
    case ErrorCode::DegenerateTheta: return "DegenerateTheta";
    case ErrorCode::MalformedCode: return "MalformedCode";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::WeightMismatch: return "WeightMismatch";
    case ErrorCode::InconsistentOrder: return "InconsistentOrder";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::HeightTie: return "HeightTie";
    case ErrorCode::SpineMismatch: return "SpineMismatch";
    case ErrorCode::NonBridge: return "NonBridge";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::NonpositiveScale: return "NonpositiveScale";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::SupportMismatch: return "SupportMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace pmaplab
