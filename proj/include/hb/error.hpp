#pragma once

#include <stdexcept>
#include <string>

namespace hb {

enum class ErrorCode {
  // geometry
  NonConvex,
  NonPlanarFace,
  DegenerateFace,
  BadOrdering,
  NonPositive,
  OutsideCone,
  // sphere partition
  DegenerateArrangement,
  OnBoundary,
  DegenerateTriangle,
  OnTriangleBoundary,
  // homotopy invariants
  UnknownSector,
  NonIntegerInvariant,
  InconsistentWrapping,
  ResidueViolation,
  NegativeConstant,
  ProbeDegenerate,
  InconsistentEdgeSigns,
  // minimal connection
  CardinalityMismatch,
  InadmissibleTopology,
  InfeasiblePotentials,
  UnbalancedDegrees,
  // octant maps / quadrature
  NoRegularPoint,
  WindingAmbiguous,
  SnapFailure,
  // extension
  TraceMismatch,
  WindingNonzero,
  EdgeEnergyTooSmall,
  // io
  ParseError,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace hb
