#pragma once

#include <stdexcept>
#include <string>

namespace mqe {

enum class ErrorCode {
  OrderCapExceeded,
  InvalidPermutation,
  NotASubgroup,
  DoesNotNormalize,
  ParseError,
  ValidationError,
  InconsistentPresentation,
  NotCoprime,
  OutOfRange,
  DTypeInadmissible,
  NonIntegralGenus,
  MixedContextMissing,
  OrderNotCovered,
  NotIndexTwo,
  NotDiagonal,
  PairingParityError,
  NoetherViolation,
  OracleCapExceeded,
  OracleMismatch,
  WrongIrregularity,
  IntegralityViolation,
  SplitExtension,
  NotGenerating,
  GenusBelowTwo,
  CatalogueError,
  IOError,
  ArithmeticOverflow,
  InvariantViolation,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::OrderCapExceeded: return "OrderCapExceeded";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::NotASubgroup: return "NotASubgroup";
    case ErrorCode::DoesNotNormalize: return "DoesNotNormalize";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::InconsistentPresentation: return "InconsistentPresentation";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DTypeInadmissible: return "DTypeInadmissible";
    case ErrorCode::NonIntegralGenus: return "NonIntegralGenus";
    case ErrorCode::MixedContextMissing: return "MixedContextMissing";
    case ErrorCode::OrderNotCovered: return "OrderNotCovered";
    case ErrorCode::NotIndexTwo: return "NotIndexTwo";
    case ErrorCode::NotDiagonal: return "NotDiagonal";
    case ErrorCode::PairingParityError: return "PairingParityError";
    case ErrorCode::NoetherViolation: return "NoetherViolation";
    case ErrorCode::OracleCapExceeded: return "OracleCapExceeded";
    case ErrorCode::OracleMismatch: return "OracleMismatch";
    case ErrorCode::WrongIrregularity: return "WrongIrregularity";
    case ErrorCode::IntegralityViolation: return "IntegralityViolation";
    case ErrorCode::SplitExtension: return "SplitExtension";
    case ErrorCode::NotGenerating: return "NotGenerating";
    case ErrorCode::GenusBelowTwo: return "GenusBelowTwo";
    case ErrorCode::CatalogueError: return "CatalogueError";
    case ErrorCode::IOError: return "IOError";
    case ErrorCode::ArithmeticOverflow: return "ArithmeticOverflow";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace mqe
