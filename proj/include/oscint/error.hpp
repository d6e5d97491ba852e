#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace oscint {

enum class ErrorKind {
  InvalidInput,
  NonConvex,
  JetOverflow,
  BadJet,
  DimensionMismatch,
  BudgetExceeded,
  NotCritical,
  QuadratureFailure,
  InvalidOrder,
  DivisionByZero,
  NoDipFound,
  IllConditioned,
  DegenerateMode,
  OutOfRange,
  IoError,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NonConvex: return "NonConvex";
    case ErrorKind::JetOverflow: return "JetOverflow";
    case ErrorKind::BadJet: return "BadJet";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NotCritical: return "NotCritical";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::InvalidOrder: return "InvalidOrder";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NoDipFound: return "NoDipFound";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::DegenerateMode: return "DegenerateMode";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Numerical failures (as opposed to bad input) map to CLI exit code 2.
constexpr bool is_numerical(ErrorKind k) {
  switch (k) {
    case ErrorKind::QuadratureFailure:
    case ErrorKind::NoDipFound:
    case ErrorKind::IllConditioned:
    case ErrorKind::DegenerateMode:
    case ErrorKind::BudgetExceeded:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace oscint
