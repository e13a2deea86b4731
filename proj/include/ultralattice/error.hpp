#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ultralattice {

enum class ErrorKind {
  NotPPowerDenominator,
  IncomparableAtPrecision,
  SyntaxError,
  DepthExceeded,
  PrecisionExceeded,
  ConfigMismatch,
  NotInvertible,
  PrecisionLoss,
  PrecisionUndecidable,
  NotCommensurable,
  BudgetExceeded,
  InvalidArgument,
  Unsupported,
};

std::string_view to_string(ErrorKind kind);

/// All library failures surface as this exception; `kind()` is the
/// machine-readable part, `what()` carries the human explanation.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPPowerDenominator: return "NotPPowerDenominator";
    case ErrorKind::IncomparableAtPrecision: return "IncomparableAtPrecision";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::PrecisionExceeded: return "PrecisionExceeded";
    case ErrorKind::ConfigMismatch: return "ConfigMismatch";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::PrecisionLoss: return "PrecisionLoss";
    case ErrorKind::PrecisionUndecidable: return "PrecisionUndecidable";
    case ErrorKind::NotCommensurable: return "NotCommensurable";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

}  // namespace ultralattice
