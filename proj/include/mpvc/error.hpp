#pragma once

#include <stdexcept>
#include <string>

namespace mpvc {

enum class ErrorCode {
  SyntaxError,
  UnknownIdentifier,
  MissingPairPart,
  DomainError,
  DimensionMismatch,
  PreconditionViolation,
  IterationLimit,
  BranchLimit,
  PointNotInOmega,
  NoFeasiblePoint,
  NonFiniteValue,
  InfeasiblePoint,
  ConsistencyViolation,
  UsageError,
};

/// Toolkit-wide exception carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::SyntaxError: return "syntax_error";
    case ErrorCode::UnknownIdentifier: return "unknown_identifier";
    case ErrorCode::MissingPairPart: return "missing_pair_part";
    case ErrorCode::DomainError: return "domain_error";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::PreconditionViolation: return "precondition_violation";
    case ErrorCode::IterationLimit: return "iteration_limit";
    case ErrorCode::BranchLimit: return "branch_limit";
    case ErrorCode::PointNotInOmega: return "point_not_in_omega";
    case ErrorCode::NoFeasiblePoint: return "no_feasible_point";
    case ErrorCode::NonFiniteValue: return "non_finite_value";
    case ErrorCode::InfeasiblePoint: return "infeasible_point";
    case ErrorCode::ConsistencyViolation: return "consistency_violation";
    case ErrorCode::UsageError: return "usage_error";
  }
  return "unknown";
}

}  // namespace mpvc
