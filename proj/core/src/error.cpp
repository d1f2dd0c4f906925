#include "epdt/error.hpp"

namespace epdt {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NegativeDelta: return "NegativeDelta";
    case ErrorCode::NonpositiveDimension: return "NonpositiveDimension";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidC: return "InvalidC";
    case ErrorCode::Nonconvergence: return "Nonconvergence";
    case ErrorCode::NearBoundary: return "NearBoundary";
    case ErrorCode::OutsideCone: return "OutsideCone";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::CFLViolation: return "CFLViolation";
    case ErrorCode::DomainTooSmall: return "DomainTooSmall";
    case ErrorCode::InvalidCriticalCondition: return "InvalidCriticalCondition";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::NonfiniteState: return "NonfiniteState";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::DegenerateUpperLimit: return "DegenerateUpperLimit";
    case ErrorCode::SweepIncomplete: return "SweepIncomplete";
    case ErrorCode::Overflow: return "Overflow";
  }
  return "Unknown";
}

}  // namespace epdt
