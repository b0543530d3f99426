#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mermin {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  NotHermitian,
  NotUnitTrace,
  NotPSD,
  NotUnitVector,
  ParseError,
  BothSingularValuesZero,
  FilterAnnihilatesState,
  NonMonotoneIndicator,
  NoViolationAnywhere,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every library failure surfaces as this exception. `kind()` is stable and
// is what the CLI prints in front of the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotUnitTrace: return "NotUnitTrace";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotUnitVector: return "NotUnitVector";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::BothSingularValuesZero: return "BothSingularValuesZero";
    case ErrorKind::FilterAnnihilatesState: return "FilterAnnihilatesState";
    case ErrorKind::NonMonotoneIndicator: return "NonMonotoneIndicator";
    case ErrorKind::NoViolationAnywhere: return "NoViolationAnywhere";
  }
  return "Unknown";
}

}  // namespace mermin
