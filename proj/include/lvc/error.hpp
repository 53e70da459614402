#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lvc {

enum class ErrorCode {
  // core
  EmptyQuery,
  NonFiniteInput,
  IndivisibleFrames,
  DimensionMismatch,
  HeadsDontDivide,
  InvalidConfig,
  // tensor-io
  BadMagic,
  UnsupportedVersion,
  UnsupportedDtype,
  UnsupportedShape,
  FortranOrderUnsupported,
  MalformedHeader,
  TruncatedPayload,
  IoFailure,
  // pipeline
  InsufficientFrames,
  MissingQuery,
};

/// Coarse classification used for process exit codes.
enum class ErrorCategory { Validation, Io };

std::string_view error_name(ErrorCode code);
ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const { return error_name(code_); }
  ErrorCategory category() const { return error_category(code_); }

 private:
  ErrorCode code_;
};

}  // namespace lvc
