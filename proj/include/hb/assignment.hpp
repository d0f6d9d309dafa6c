#pragma once

#include <utility>
#include <vector>

#include "hb/topology.hpp"

namespace hb {

// Minimum-cost perfect assignment on a square cost matrix (shortest
// augmenting path, O(n^3)). Returns the column matched to each row.
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost);

struct ConnectionResult {
  double length = 0.0;
  std::vector<int> matching;        // matching[i] = index into negatives
  std::vector<double> pair_dists;
};

ConnectionResult minimal_connection(const std::vector<Vec3>& positives,
                                    const std::vector<Vec3>& negatives);

struct SectorBound {
  SignVector sigma;
  double area = 0.0;
  double length = 0.0;
  std::vector<std::pair<Vec3, Vec3>> pairs;
};

struct LowerBoundReport {
  double E_minus = 0.0;
  std::vector<SectorBound> sectors;
};

// Theorem-1 lower bound: E^- = sum_sigma 2 A^sigma L(P^sigma, N^sigma), with
// vertex constellations built with multiplicity |w^{a sigma}|.
LowerBoundReport lower_bound_energy(const Polyhedron& poly, const SectorPartition& part,
                                    const TangentTopology& topo, bool check_admissibility = true);
LowerBoundReport lower_bound_energy(const Prism& prism, const SectorPartition& part,
                                    const TangentTopology& topo, bool check_admissibility = true);

// Weak-duality side of the sector linear program: sum_a xi^a w^{a sigma} for
// potentials with |xi^a - xi^b| <= |v^a - v^b|; never exceeds the primal L.
double dual_feasible_value(const Polyhedron& poly, const TangentTopology& topo,
                           const SignVector& sigma, const std::vector<double>& xi);

// Project arbitrary potentials onto the feasible set by iterating
// xi^a <- min_b (xi^b + |v^a - v^b|).
std::vector<double> project_feasible_potentials(const Polyhedron& poly, std::vector<double> xi);

// Brezis-Coron-Lieb energy 8 pi L for point defects of given degrees.
double bcl_energy(const std::vector<Vec3>& points, const std::vector<int>& degrees);

// (pi/2) L_z sum_{a sigma} |w^{a sigma}|; a floor under E^- for prisms.
double prism_floor(const TangentTopology& topo, double Lz);

}  // namespace hb
