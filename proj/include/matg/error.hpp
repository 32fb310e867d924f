#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace matg {

enum class ErrorCode {
  NotComposable,
  UnknownArrow,
  UnknownObject,
  InvalidAction,
  DimensionMismatch,
  UnsupportedPair,
  SingularConjugator,
  SingularMatrix,
  NotSymmetric,
  NotPositiveDefinite,
  NotClosed,
  MixedModes,
  NonPositiveDeterminant,
  CornerMismatch,
  NotCommuting,
  BodyMismatch,
  InvalidBody,
  ParseError,
  UnsupportedDescriptor,
  ConsistencyFailure,
};

constexpr std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotComposable: return "NotComposable";
    case ErrorCode::UnknownArrow: return "UnknownArrow";
    case ErrorCode::UnknownObject: return "UnknownObject";
    case ErrorCode::InvalidAction: return "InvalidAction";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnsupportedPair: return "UnsupportedPair";
    case ErrorCode::SingularConjugator: return "SingularConjugator";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::MixedModes: return "MixedModes";
    case ErrorCode::NonPositiveDeterminant: return "NonPositiveDeterminant";
    case ErrorCode::CornerMismatch: return "CornerMismatch";
    case ErrorCode::NotCommuting: return "NotCommuting";
    case ErrorCode::BodyMismatch: return "BodyMismatch";
    case ErrorCode::InvalidBody: return "InvalidBody";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedDescriptor: return "UnsupportedDescriptor";
    case ErrorCode::ConsistencyFailure: return "ConsistencyFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace matg
