#include "lvc/error.hpp"

namespace lvc {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyQuery: return "EmptyQuery";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::IndivisibleFrames: return "IndivisibleFrames";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::HeadsDontDivide: return "HeadsDontDivide";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::UnsupportedDtype: return "UnsupportedDtype";
    case ErrorCode::UnsupportedShape: return "UnsupportedShape";
    case ErrorCode::FortranOrderUnsupported: return "FortranOrderUnsupported";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InsufficientFrames: return "InsufficientFrames";
    case ErrorCode::MissingQuery: return "MissingQuery";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) {
  return code == ErrorCode::IoFailure ? ErrorCategory::Io : ErrorCategory::Validation;
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

}  // namespace lvc
