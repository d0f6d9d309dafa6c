#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "hb/sphere_partition.hpp"

namespace hb {

// Octant sign triples are indexed like prism vertex ids: bit 0 set = sigma_x
// positive, bit 1 = sigma_y, bit 2 = sigma_z.
inline std::array<int, 3> octant_signs(int id) {
  return {(id & 1) ? 1 : -1, (id & 2) ? 1 : -1, (id & 4) ? 1 : -1};
}
inline int octant_id(int sx, int sy, int sz) {
  return (sx > 0 ? 1 : 0) | (sy > 0 ? 2 : 0) | (sz > 0 ? 4 : 0);
}

// Per-vertex invariants of a normalized octant configuration (the field
// pulled back to the positive octant chart). Omega is anchored so that the
// identity map f(w) = w has Omega = -pi/2.
struct OctantTopology {
  std::array<int, 3> e{1, 1, 1};
  std::array<int, 3> k{0, 0, 0};
  double omega = 0.0;

  int e_star() const { return e[0] * e[1] * e[2]; }
};

// Wrapping numbers over the 8 octant sectors, chart convention.
using OctantWrapping = std::array<int, 8>;

// Full tangent topology: per vertex, wrapping numbers over the partition's
// sectors in the global (cleaved-surface) convention.
struct TangentTopology {
  std::vector<std::map<SignVector, int>> w;  // indexed by vertex id

  int wrapping(int vertex, const SignVector& sv) const {
    const auto& m = w[vertex];
    auto it = m.find(sv);
    return it == m.end() ? 0 : it->second;
  }
};

// Residue invariant: Omega + 2 pi sum(sigma_j k_j) + e_* pi/2 = 0 (mod 4 pi)
// for every sigma; equivalently Omega is the right odd multiple of pi/2.
bool octant_residue_ok(const OctantTopology& t, double tol = 1e-9);

OctantTopology octant_from_wrapping(const OctantWrapping& w);
OctantWrapping wrapping_from_octant(const OctantTopology& t);

enum class OctantClass { Conformal, Anticonformal, Neither };

struct OctantClassification {
  OctantClass label;
  double omega_plus;   // anticonformal threshold: Omega >= omega_plus
  double omega_minus;  // conformal threshold:     Omega <= -omega_minus
};

OctantClassification classify_octant(const OctantTopology& t);

// Sign product of a prism vertex id; the chart reflection T_a s = (-alpha_j s_j)
// has determinant -alpha_*, which converts chart wrapping numbers to the
// global convention and back.
inline int vertex_sign_product(int vertex_id) {
  auto s = octant_signs(vertex_id);
  return s[0] * s[1] * s[2];
}
inline int chart_orientation(int vertex_id) { return -vertex_sign_product(vertex_id); }

// Full 6-face prism sign vector of the octant sign triple.
SignVector prism_sign_vector(const Prism& prism, const SectorPartition& part,
                             const std::array<int, 3>& sigma);

// Global tangent topology of a prism from per-vertex chart octant data.
TangentTopology prism_topology_from_octants(const Prism& prism, const SectorPartition& part,
                                            const std::array<OctantTopology, 8>& octants);

// Chart octant wrapping numbers of one prism vertex from the global topology.
OctantWrapping prism_chart_wrapping(const Prism& prism, const SectorPartition& part,
                                    const TangentTopology& topo, int vertex_id);

struct AdmissibilityReport {
  bool pass = true;
  std::vector<std::string> violations;
  std::vector<std::string> unchecked;
};

AdmissibilityReport check_admissible(const Polyhedron& poly, const SectorPartition& part,
                                     const TangentTopology& topo);
AdmissibilityReport check_admissible(const Prism& prism, const SectorPartition& part,
                                     const TangentTopology& topo);

// Appendix reconstruction: edge signs, kink numbers and trapped area of one
// vertex from its wrapping numbers, by probing across the star circles.
// Returned values follow the appendix's own conventions: edge_signs[r] is the
// sign along star edge E^r, kink_numbers[r] belongs to the face spanned by
// (E^r, E^{r+1}), and trapped_area is oriented opposite to the chart anchor.
struct VertexStarInvariants {
  std::vector<int> edge_signs;
  std::vector<int> kink_numbers;
  double trapped_area = 0.0;
};

struct ProbeOptions {
  double epsilon_start = 1e-3;
  int max_halvings = 40;
};

VertexStarInvariants invariants_from_wrapping_star(const Polyhedron& poly, int vertex,
                                                   const std::map<SignVector, int>& w_global,
                                                   const SectorPartition& part,
                                                   const ProbeOptions& opt = {});

// Star-frame -> chart-frame conversion for prism vertices.
OctantTopology octant_from_star_invariants(const Prism& prism, int vertex_id,
                                           const VertexStarInvariants& star);

// Frank-Oseen sandwich: (K_- E_minus, C K_+ kappa^3 E_minus).
std::pair<double, double> frank_oseen_sandwich(double K1, double K2, double K3, double E_minus,
                                               double kappa, double C);

}  // namespace hb
