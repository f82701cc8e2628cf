#include "linkcharge/error.hpp"

namespace linkcharge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::InvalidLinkage: return "InvalidLinkage";
    case ErrorCode::NotRealizable: return "NotRealizable";
    case ErrorCode::NotConvex: return "NotConvex";
    case ErrorCode::BoundaryConfiguration: return "BoundaryConfiguration";
    case ErrorCode::EmptySlice: return "EmptySlice";
    case ErrorCode::EmptyModuli: return "EmptyModuli";
    case ErrorCode::DegenerateDistance: return "DegenerateDistance";
    case ErrorCode::BoundarySlicePoint: return "BoundarySlicePoint";
    case ErrorCode::NonPositiveCharge: return "NonPositiveCharge";
    case ErrorCode::NongenericLinkage: return "NongenericLinkage";
    case ErrorCode::NumericalConditioning: return "NumericalConditioning";
    case ErrorCode::AdjacentControlCharges: return "AdjacentControlCharges";
    case ErrorCode::InvalidChargePath: return "InvalidChargePath";
    case ErrorCode::ContinuationBreak: return "ContinuationBreak";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace linkcharge
