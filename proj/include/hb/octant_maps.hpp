#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "hb/topology.hpp"

namespace hb {

// Stereographic projection w = (s_x + i s_y)/(1 + s_z); -z maps to infinity.
complexd stereographic(const Vec3& s);
Vec3 inverse_stereographic(const complexd& F);
// Partials of inverse_stereographic with respect to (Re F, Im F).
std::pair<Vec3, Vec3> inverse_stereographic_jacobian(const complexd& F);

// Charts for octant configurations on the positive octant.
//  QuarterDiskPolar: (u, v) = (r, psi), w = r e^{i psi}, [0,1] x [0, pi/2].
//  PolarOctant:      (u, v) = (theta, phi) in [0, pi/2]^2.
enum class Chart { QuarterDiskPolar, PolarOctant };

struct ChartJet {
  Vec3 value;
  Vec3 du, dv;
};

struct EdgeJet {
  Vec3 value;
  Vec3 deriv;  // d/d alpha along the arclength parameterization
};

// Domain embedding s(u, v) of a chart point on the octant.
ChartJet chart_embedding(Chart chart, double u, double v);

enum class DensityKind { Energy, SignedArea };

// One rectangular integration patch with its own integrand (per du dv).
struct QuadPatch {
  double u0 = 0, u1 = 1, v0 = 0, v1 = 1;
  std::vector<double> breaks_u, breaks_v;
  std::function<double(double, double)> integrand;
};

using ValueWeight = std::function<double(const Vec3&)>;
// Weight as a function of the field's own chart coordinates.
using DomainWeight = std::function<double(double, double)>;

// Evaluable octant configuration nu: O -> S^2 with analytic derivatives.
class OctantField {
 public:
  virtual ~OctantField() = default;

  virtual Chart chart() const = 0;
  std::array<double, 4> domain() const;  // (u0, u1, v0, v1) of the chart rectangle
  virtual ChartJet eval(double u, double v) const = 0;

  virtual std::vector<double> breaks_u() const { return {}; }
  virtual std::vector<double> breaks_v() const { return {}; }

  // Chart density per du dv. SignedArea is anchored so that the identity map
  // f(w) = w integrates to -pi/2 over the octant.
  virtual double density(DensityKind kind, double u, double v) const;

  // Exact patch decomposition for density integrals, optionally weighted by a
  // functional of the field value (wrapping-number characteristic functions)
  // and/or of the chart point (pyramid ray lengths).
  virtual std::vector<QuadPatch> density_patches(DensityKind kind, const ValueWeight* vweight,
                                                 const DomainWeight* dweight = nullptr) const;

  // Trace along the octant edge about axis j (0=x,1=y,2=z), alpha in [0, pi/2].
  virtual EdgeJet edge_trace(int axis, double alpha) const;
  virtual std::vector<double> edge_breaks(int axis) const { return {}; }
};

// f(w) = lambda w^n A(w) B(w) C(w) with alternating zeros and poles; realizes
// the conformal octant topology (e, k, Omega_*).
class RationalMap : public OctantField {
 public:
  struct Params {
    int lambda = 1;
    int n = 1;
    std::vector<std::pair<double, int>> real_zp;     // (r_j, rho_j)
    std::vector<std::pair<double, int>> imag_zp;     // (s_k, sigma_k)
    std::vector<std::pair<complexd, int>> complex_zp;  // (t_l, tau_l)
  };

  explicit RationalMap(Params p);

  const Params& params() const { return p_; }

  // f and f' by direct evaluation (f' = f * logarithmic derivative).
  complexd f(const complexd& w) const;
  complexd f_prime(const complexd& w) const;
  complexd log_derivative(const complexd& w) const;

  // Closed forms from the map parameters.
  std::array<int, 3> edge_signs_closed_form() const;
  std::array<int, 3> kinks_closed_form() const;
  double omega_closed_form() const;  // -(|n| + 2(a+b) + 4c) pi / 2
  OctantTopology topology_closed_form() const;

  Chart chart() const override { return Chart::QuarterDiskPolar; }
  ChartJet eval(double u, double v) const override;
  double density(DensityKind kind, double u, double v) const override;
  std::vector<QuadPatch> density_patches(DensityKind kind, const ValueWeight* vweight,
                                         const DomainWeight* dweight = nullptr) const override;
  std::vector<double> breaks_u() const override;
  std::vector<double> breaks_v() const override;
  EdgeJet edge_trace(int axis, double alpha) const override;
  std::vector<double> edge_breaks(int axis) const override;

 private:
  Params p_;
};

// Conformal representative of (e, k, Omega_*) with the standard zero/pole
// placement r_j = 1/4 + j/(2a), s_k = 1/4 + k/(2b), t_l on the c-ring.
RationalMap build_conformal_map(const std::array<int, 3>& e, const std::array<int, 3>& k);

// Omega_* = -2 pi (sum |k_j| + 1 - 3/4 e_*).
double omega_star(const std::array<int, 3>& e, const std::array<int, 3>& k);

// Base map locally replaced inside D_eps(w0) by an m-fold covering, shifting
// the trapped area by 4 pi m while keeping the boundary trace.
class SurgeredMap : public OctantField {
 public:
  SurgeredMap(RationalMap base, int m, complexd w0, double eps);

  const RationalMap& base() const { return base_; }
  int covering() const { return m_; }
  complexd center() const { return w0_; }
  double radius() const { return eps_; }

  // F, dF/dw, dF/dwbar at w.
  struct FJet { complexd F, Fw, Fwb; };
  FJet f_jet(const complexd& w) const;

  Chart chart() const override { return Chart::QuarterDiskPolar; }
  ChartJet eval(double u, double v) const override;
  double density(DensityKind kind, double u, double v) const override;
  std::vector<QuadPatch> density_patches(DensityKind kind, const ValueWeight* vweight,
                                         const DomainWeight* dweight = nullptr) const override;
  std::vector<double> breaks_u() const override { return base_.breaks_u(); }
  std::vector<double> breaks_v() const override { return base_.breaks_v(); }
  EdgeJet edge_trace(int axis, double alpha) const override { return base_.edge_trace(axis, alpha); }
  std::vector<double> edge_breaks(int axis) const override { return base_.edge_breaks(axis); }

 private:
  RationalMap base_;
  int m_;
  complexd w0_;
  double eps_;
};

// Field for an arbitrary admissible octant topology: the conformal
// representative of (e, k, Omega_*), surgically adjusted when Omega differs.
std::shared_ptr<OctantField> surgered_map(const OctantTopology& topo);

// nu(theta, phi) = (sin a cos b, sin a sin b, cos a), a = (4M+1) theta,
// b = (4N+1) phi.
class ParametricMNField : public OctantField {
 public:
  ParametricMNField(int M, int N);
  int M() const { return M_; }
  int N() const { return N_; }

  Chart chart() const override { return Chart::PolarOctant; }
  ChartJet eval(double u, double v) const override;
  double density(DensityKind kind, double u, double v) const override;
  std::vector<QuadPatch> density_patches(DensityKind kind, const ValueWeight* vweight,
                                         const DomainWeight* dweight = nullptr) const override;
  std::vector<double> breaks_u() const override;
  std::vector<double> breaks_v() const override;
  EdgeJet edge_trace(int axis, double alpha) const override;

 private:
  int M_, N_;
};

// The reflection-symmetric example configuration: the same normalized field
// at every prism vertex. Global wrapping numbers then differ only by the
// per-vertex chart orientation.
struct PrismFieldSet {
  std::array<std::shared_ptr<OctantField>, 8> normalized;
};

PrismFieldSet mn_example_field(int M, int N);
PrismFieldSet uniform_field_set(const std::shared_ptr<OctantField>& f);

// Map a global direction at a prism vertex into the vertex chart: the
// diagonal reflection T_a s = (-alpha_j s_j) sends the vertex octant to the
// positive octant.
Vec3 vertex_chart_direction(int vertex_id, const Vec3& s_global);

}  // namespace hb
