#include "hb/error.hpp"

namespace hb {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonConvex: return "NonConvex";
    case ErrorCode::NonPlanarFace: return "NonPlanarFace";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::BadOrdering: return "BadOrdering";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::OutsideCone: return "OutsideCone";
    case ErrorCode::DegenerateArrangement: return "DegenerateArrangement";
    case ErrorCode::OnBoundary: return "OnBoundary";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::OnTriangleBoundary: return "OnTriangleBoundary";
    case ErrorCode::UnknownSector: return "UnknownSector";
    case ErrorCode::NonIntegerInvariant: return "NonIntegerInvariant";
    case ErrorCode::InconsistentWrapping: return "InconsistentWrapping";
    case ErrorCode::ResidueViolation: return "ResidueViolation";
    case ErrorCode::NegativeConstant: return "NegativeConstant";
    case ErrorCode::ProbeDegenerate: return "ProbeDegenerate";
    case ErrorCode::InconsistentEdgeSigns: return "InconsistentEdgeSigns";
    case ErrorCode::CardinalityMismatch: return "CardinalityMismatch";
    case ErrorCode::InadmissibleTopology: return "InadmissibleTopology";
    case ErrorCode::InfeasiblePotentials: return "InfeasiblePotentials";
    case ErrorCode::UnbalancedDegrees: return "UnbalancedDegrees";
    case ErrorCode::NoRegularPoint: return "NoRegularPoint";
    case ErrorCode::WindingAmbiguous: return "WindingAmbiguous";
    case ErrorCode::SnapFailure: return "SnapFailure";
    case ErrorCode::TraceMismatch: return "TraceMismatch";
    case ErrorCode::WindingNonzero: return "WindingNonzero";
    case ErrorCode::EdgeEnergyTooSmall: return "EdgeEnergyTooSmall";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace hb
