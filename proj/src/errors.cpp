#include "capls/errors.hpp"

namespace capls {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::DegenerateClassMean: return "DegenerateClassMean";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RowCountMismatch: return "RowCountMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::InsufficientClassSize: return "InsufficientClassSize";
    case ErrorCode::UnknownClassInTargetTrain: return "UnknownClassInTargetTrain";
    case ErrorCode::EmptyTestClass: return "EmptyTestClass";
  }
  return "Error";
}

int Error::exit_code() const noexcept {
  switch (code_) {
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::NonConvergence:
    case ErrorCode::DegenerateClassMean:
      return 3;
    default:
      return 2;
  }
}

}  // namespace capls
