#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qrms {

enum class ErrorCode {
  NotHermitian,
  DimensionMismatch,
  InvalidPovm,
  NegativeSquare,
  MissingDisturbedObservable,
  NotADistribution,
  NotCommutingInState,
  TooLarge,
  UnsupportedDensity,
  EmptyFamily,
  InvalidArgument,
  ParseError,
  ValidationError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidPovm: return "InvalidPovm";
    case ErrorCode::NegativeSquare: return "NegativeSquare";
    case ErrorCode::MissingDisturbedObservable: return "MissingDisturbedObservable";
    case ErrorCode::NotADistribution: return "NotADistribution";
    case ErrorCode::NotCommutingInState: return "NotCommutingInState";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::UnsupportedDensity: return "UnsupportedDensity";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

// Single exception type for the library. `magnitude` carries the offending
// residual where one exists (norm defect, commutator residual, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, double magnitude = 0.0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        magnitude_(magnitude) {}

  ErrorCode code() const noexcept { return code_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  ErrorCode code_;
  double magnitude_;
};

}  // namespace qrms
