#pragma once

#include <stdexcept>
#include <string>

namespace capls {

/// Machine-readable failure categories. The CLI maps InvalidInput-class
/// codes to exit code 2 and Numerical-class codes to exit code 3.
enum class ErrorCode {
  DimensionMismatch,
  KTooLarge,
  NotPositiveDefinite,
  NonConvergence,
  ZeroVector,
  DegenerateData,
  EmptyClass,
  DegenerateClassMean,
  ParseError,
  RowCountMismatch,
  NonFiniteValue,
  IoError,
  ConfigError,
  LengthMismatch,
  LabelOutOfRange,
  EmptyTrainingSet,
  InsufficientClassSize,
  UnknownClassInTargetTrain,
  EmptyTestClass,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Process exit code contract: 2 = input error, 3 = numerical failure.
  int exit_code() const noexcept;

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace capls
