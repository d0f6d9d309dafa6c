#pragma once

#include <array>
#include <optional>

#include "hb/quadrature.hpp"

namespace hb {

// Continuous unwrapped boundary angle of the extension trace on the rhombus
// boundary of face (axis, tau): n(R(phi)) = sin(Theta) p + eps cos(Theta) q
// in the face frame, Theta(0) = 0.
class ThetaTrace {
 public:
  ThetaTrace(const Prism& prism, const PrismFieldSet& fields, int axis, int tau);

  double theta(double phi) const;
  double theta_prime(double phi) const;
  int epsilon() const { return eps_; }
  int axis() const { return axis_; }
  int tau() const { return tau_; }

  // Trace value and phi-derivative in global coordinates.
  std::pair<Vec3, Vec3> trace(double phi) const;

 private:
  const Prism* prism_;
  const PrismFieldSet* fields_;
  int axis_, tau_;
  int eps_ = 1;
  FaceFrame frame_;
  std::vector<std::pair<double, double>> samples_;  // (phi, unwrapped theta)
};

// sigma = (pi sum_vertices E_(1)j)^(-1/2); requires the pi/8 floor.
double sigma_param(double edge_energy_sum);

// Step 1: E_X = int r^a(s) (grad nu)^2 dOmega over the vertex octant.
QuadResult energy_X(const OctantField& normalized, const Prism& prism, int vertex_id,
                    const QuadratureSpec& spec = {});

// Step 2 energy of the ray-constant field on the origin pyramid over the
// cleaved face, computed exactly from the Step-1 trace.
QuadResult energy_Y(const OctantField& normalized, const Prism& prism, int vertex_id,
                    const QuadratureSpec& spec = {});

// Step 3: the five contributions of the face pyramid energy.
struct ZEnergy {
  double total = 0.0;
  std::array<double, 5> terms{};
  double error = 0.0;
  double sigma = 0.0;
};

ZEnergy energy_Z(const Prism& prism, const ThetaTrace& theta, double sigma,
                 const QuadratureSpec& spec = {});

struct UpperBoundReport {
  double kappa = 0.0;
  std::array<double, 8> E2{}, EX{}, EY{};
  std::array<std::array<double, 3>, 8> E1{};
  std::array<ZEnergy, 6> EZ{};       // ordered (axis 0 tau -, axis 0 tau +, axis 1 ...)
  std::array<double, 6> sigma{};
  double E_total = 0.0;
  double E_minus = 0.0;
  double ratio = 0.0;
  double functional = 0.0;           // kappa^3 L_z (sum E2 + sum sqrt(E1))
  double quadrature_error = 0.0;
};

inline int face_slot(int axis, int tau) { return 2 * axis + (tau > 0 ? 1 : 0); }

// Assemble the full extension energy (Steps 1-3; the Step-4 repair
// contributes nothing in the shrinking limit) and compare with the
// Theorem-1 lower bound.
UpperBoundReport extend_and_bound(const Prism& prism, const SectorPartition& part,
                                  const PrismFieldSet& fields,
                                  const std::optional<std::array<OctantTopology, 8>>& octants,
                                  const QuadratureSpec& spec = {});

}  // namespace hb
