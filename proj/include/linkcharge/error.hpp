#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace linkcharge {

enum class ErrorCode {
  DegenerateInput,
  InvalidLinkage,
  NotRealizable,
  NotConvex,
  BoundaryConfiguration,
  EmptySlice,
  EmptyModuli,
  DegenerateDistance,
  BoundarySlicePoint,
  NonPositiveCharge,
  NongenericLinkage,
  NumericalConditioning,
  AdjacentControlCharges,
  InvalidChargePath,
  ContinuationBreak,
  NotOnBoundary,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI and the service can map it to a structured error without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace linkcharge
