#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace epdt {

enum class ErrorCode {
  InvalidArgument,
  NegativeDelta,
  NonpositiveDimension,
  DomainError,
  InvalidC,
  Nonconvergence,
  NearBoundary,
  OutsideCone,
  QuadratureFailure,
  CFLViolation,
  DomainTooSmall,
  InvalidCriticalCondition,
  ZeroDenominator,
  StepUnderflow,
  NonfiniteState,
  DimensionTooSmall,
  DegenerateUpperLimit,
  SweepIncomplete,
  Overflow,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a machine-readable code so the
// CLI can map it onto an exit status and a JSON error object.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const char* message) {
  if (!condition) fail(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace epdt
