#pragma once

#include <functional>

#include "hb/octant_maps.hpp"

namespace hb {

struct QuadratureSpec {
  double rel_tol = 1e-7;   // target relative tolerance
  double abs_tol = 1e-9;   // floor for near-zero integrals
  int max_depth = 20;      // subdivision depth per seed cell
  bool mc_fallback = true; // stratified Monte-Carlo for unresolved cells
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;      // difference between refinement levels, summed
  bool tolerance_met = true;
};

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const std::vector<double>& breaks, const QuadratureSpec& spec);

QuadResult integrate_2d(const std::function<double(double, double)>& f, double u0, double u1,
                        double v0, double v1, const std::vector<double>& breaks_u,
                        const std::vector<double>& breaks_v, const QuadratureSpec& spec);

QuadResult integrate_patches(const std::vector<QuadPatch>& patches, const QuadratureSpec& spec);

// Dirichlet energy of the octant configuration, E_(2).
QuadResult energy_E2(const OctantField& field, const QuadratureSpec& spec = {});

// Edge energy E_(1)j along the octant edge about axis j.
QuadResult energy_E1(const OctantField& field, int axis, const QuadratureSpec& spec = {});

// Signed trapped area Omega (anchored: f(w) = w gives -pi/2).
QuadResult trapped_area_numeric(const OctantField& field, const QuadratureSpec& spec = {});

struct WrappingResult {
  OctantWrapping w{};            // snapped integers
  std::array<double, 8> raw{};   // pre-snap quadrature values
  std::array<double, 8> err{};
};

// Chart wrapping numbers over the 8 target octants, by sector-resolved
// quadrature of the signed pullback; values snapped to integers.
WrappingResult wrapping_numbers_numeric(const OctantField& field, const QuadratureSpec& spec = {});

struct OctantEnergyReport {
  double E2 = 0, E2_err = 0;
  std::array<double, 3> E1{}, E1_err{};
  double omega = 0, omega_err = 0;
  WrappingResult wrapping;
};

OctantEnergyReport octant_energy_report(const OctantField& field, const QuadratureSpec& spec = {});

// Numeric invariants: edge signs from the corner values, kink numbers by
// unwrapping the boundary traces, trapped area by quadrature.
OctantTopology map_invariants(const OctantField& field, const QuadratureSpec& spec = {});

// Global prism topology of a per-vertex field set, by quadrature.
TangentTopology numeric_prism_topology(const Prism& prism, const SectorPartition& part,
                                       const PrismFieldSet& fields,
                                       const QuadratureSpec& spec = {});

// Deterministic parallel map: results[i] = job(i); worker count from
// HB_THREADS (default: hardware concurrency).
void parallel_for(int n, const std::function<void(int)>& job);

}  // namespace hb
