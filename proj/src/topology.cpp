#include "hb/topology.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "hb/error.hpp"

namespace hb {

namespace {

bool is_near_integer(double x, double tol = 1e-9) { return std::abs(x - std::round(x)) <= tol; }

}  // namespace

bool octant_residue_ok(const OctantTopology& t, double tol) {
  const double sum_k = t.k[0] + t.k[1] + t.k[2];  // sigma = (+,+,+)
  const double r = (t.omega + 2.0 * kPi * sum_k + t.e_star() * kPi / 2.0) / (4.0 * kPi);
  return is_near_integer(r, tol);
}

OctantTopology octant_from_wrapping(const OctantWrapping& w) {
  OctantTopology t;
  // e_t = -sum_sigma sigma_r sigma_s w^sigma, r,s,t distinct
  for (int axis = 0; axis < 3; ++axis) {
    const int r = (axis + 1) % 3, s = (axis + 2) % 3;
    int et = 0;
    for (int id = 0; id < 8; ++id) {
      auto sg = octant_signs(id);
      et -= sg[r] * sg[s] * w[id];
    }
    if (et != 1 && et != -1)
      fail(ErrorCode::InconsistentWrapping, "edge sign e_" + std::to_string(axis) +
                                                " = " + std::to_string(et) + ", expected +-1");
    t.e[axis] = et;
  }
  const int estar = t.e_star();
  // k_r = 1/4 sum sigma_r w^sigma + 1/4 e_r e_*
  for (int axis = 0; axis < 3; ++axis) {
    int sum = 0;
    for (int id = 0; id < 8; ++id) sum += octant_signs(id)[axis] * w[id];
    const int num = sum + t.e[axis] * estar;
    if (num % 4 != 0)
      fail(ErrorCode::NonIntegerInvariant, "kink number k_" + std::to_string(axis) +
                                               " = " + std::to_string(num) + "/4 not an integer");
    t.k[axis] = num / 4;
  }
  int wsum = 0;
  for (int id = 0; id < 8; ++id) wsum += w[id];
  t.omega = kPi / 2.0 * wsum;
  if (!octant_residue_ok(t))
    fail(ErrorCode::InconsistentWrapping, "trapped area violates the residue invariant");
  return t;
}

OctantWrapping wrapping_from_octant(const OctantTopology& t) {
  if (!octant_residue_ok(t))
    fail(ErrorCode::ResidueViolation, "Omega is not an admissible multiple of pi/2");
  const int estar = t.e_star();
  const int eid = octant_id(t.e[0], t.e[1], t.e[2]);
  OctantWrapping w{};
  for (int id = 0; id < 8; ++id) {
    auto sg = octant_signs(id);
    const double val = t.omega / (4.0 * kPi) +
                       0.5 * (sg[0] * t.k[0] + sg[1] * t.k[1] + sg[2] * t.k[2]) +
                       estar / 8.0 * (1.0 - 8.0 * (id == eid ? 1.0 : 0.0));
    if (!is_near_integer(val))
      fail(ErrorCode::ResidueViolation, "non-integer wrapping number");
    w[id] = static_cast<int>(std::llround(val));
  }
  return w;
}

OctantClassification classify_octant(const OctantTopology& t) {
  const int estar = t.e_star();
  const double ksum = std::abs(t.k[0]) + std::abs(t.k[1]) + std::abs(t.k[2]);
  bool all_le = true, all_gt = true;
  for (int j = 0; j < 3; ++j) {
    const int v = estar * t.e[j] * t.k[j];
    all_le = all_le && v <= 0;
    all_gt = all_gt && v > 0;
  }
  const double omega_estar = 2.0 * kPi * ksum + 2.0 * kPi * (all_le ? 1.75 : -0.25);
  const double omega_mestar = 2.0 * kPi * ksum - 2.0 * kPi * (all_gt ? 1.75 : -0.25);

  OctantClassification c{};
  c.omega_plus = (estar > 0) ? omega_estar : omega_mestar;
  c.omega_minus = (estar > 0) ? omega_mestar : omega_estar;
  const double tol = 1e-9;
  if (t.omega <= -c.omega_minus + tol)
    c.label = OctantClass::Conformal;
  else if (t.omega >= c.omega_plus - tol)
    c.label = OctantClass::Anticonformal;
  else
    c.label = OctantClass::Neither;
  return c;
}

SignVector prism_sign_vector(const Prism& prism, const SectorPartition& part,
                             const std::array<int, 3>& sigma) {
  // Any interior direction of the octant works; build signs per face normal.
  const Vec3 s{sigma[0] / std::sqrt(3.0), sigma[1] / std::sqrt(3.0), sigma[2] / std::sqrt(3.0)};
  (void)prism;
  return sector_of(part, s);
}

TangentTopology prism_topology_from_octants(const Prism& prism, const SectorPartition& part,
                                            const std::array<OctantTopology, 8>& octants) {
  TangentTopology topo;
  topo.w.resize(8);
  for (int a = 0; a < 8; ++a) {
    const OctantWrapping wc = wrapping_from_octant(octants[a]);
    const int orient = chart_orientation(a);
    for (int id = 0; id < 8; ++id) {
      if (wc[id] == 0) continue;
      topo.w[a][prism_sign_vector(prism, part, octant_signs(id))] = orient * wc[id];
    }
  }
  return topo;
}

OctantWrapping prism_chart_wrapping(const Prism& prism, const SectorPartition& part,
                                    const TangentTopology& topo, int vertex_id) {
  OctantWrapping w{};
  const int orient = chart_orientation(vertex_id);
  for (int id = 0; id < 8; ++id)
    w[id] = orient * topo.wrapping(vertex_id, prism_sign_vector(prism, part, octant_signs(id)));
  return w;
}

namespace {

void check_sum_rule(const SectorPartition& part, const TangentTopology& topo,
                    AdmissibilityReport& rep) {
  // Referenced sectors must exist.
  for (size_t a = 0; a < topo.w.size(); ++a)
    for (const auto& [sv, val] : topo.w[a])
      if (part.sector_index(sv) < 0)
        fail(ErrorCode::UnknownSector, "vertex " + std::to_string(a) +
                                           " references unknown sector " + sv.str());
  std::map<SignVector, int> sums;
  for (const auto& wm : topo.w)
    for (const auto& [sv, val] : wm) sums[sv] += val;
  for (const auto& [sv, total] : sums)
    if (total != 0) {
      rep.pass = false;
      rep.violations.push_back("sum rule: sector " + sv.str() + " sums to " +
                               std::to_string(total));
    }
}

}  // namespace

AdmissibilityReport check_admissible(const Polyhedron& poly, const SectorPartition& part,
                                     const TangentTopology& topo) {
  AdmissibilityReport rep;
  if (topo.w.size() != static_cast<size_t>(poly.n_vertices()))
    fail(ErrorCode::UnknownSector, "topology vertex count mismatch");
  check_sum_rule(part, topo, rep);
  // Per-vertex reconstructibility; failures are admissibility violations.
  for (int a = 0; a < poly.n_vertices(); ++a) {
    try {
      invariants_from_wrapping_star(poly, a, topo.w[a], part);
    } catch (const Error& e) {
      rep.pass = false;
      rep.violations.push_back("vertex " + std::to_string(a) + ": " + e.what());
    }
  }
  rep.unchecked.push_back("face/edge continuity constraints beyond the sum rule");
  return rep;
}

AdmissibilityReport check_admissible(const Prism& prism, const SectorPartition& part,
                                     const TangentTopology& topo) {
  AdmissibilityReport rep;
  if (topo.w.size() != 8) fail(ErrorCode::UnknownSector, "prism topology needs 8 vertices");
  check_sum_rule(part, topo, rep);

  std::array<OctantTopology, 8> oct;
  std::array<bool, 8> ok{};
  for (int a = 0; a < 8; ++a) {
    try {
      oct[a] = octant_from_wrapping(prism_chart_wrapping(prism, part, topo, a));
      ok[a] = true;
      if (!octant_residue_ok(oct[a])) {
        rep.pass = false;
        rep.violations.push_back("vertex " + std::to_string(a) + ": residue invariant fails");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NonIntegerInvariant) throw;
      rep.pass = false;
      rep.violations.push_back("vertex " + std::to_string(a) + ": " + e.what());
    }
  }
  // Edge-sign compatibility: vertices across an axis-j edge share e_j.
  for (int a = 0; a < 8; ++a)
    for (int j = 0; j < 3; ++j) {
      const int b = a ^ (1 << j);
      if (b < a || !ok[a] || !ok[b]) continue;
      if (oct[a].e[j] != oct[b].e[j]) {
        rep.pass = false;
        std::ostringstream os;
        os << "edge signs differ along the axis-" << j << " edge between vertices " << a
           << " and " << b;
        rep.violations.push_back(os.str());
      }
    }
  rep.unchecked.push_back("kink-number sum rules on prism faces");
  return rep;
}

VertexStarInvariants invariants_from_wrapping_star(const Polyhedron& poly, int vertex,
                                                   const std::map<SignVector, int>& w_global,
                                                   const SectorPartition& part,
                                                   const ProbeOptions& opt) {
  const VertexStar& star = poly.vertex_stars()[vertex];
  const int b = static_cast<int>(star.edge_dirs.size());
  const auto& normals = poly.face_normals();

  // The appendix formulas are written for the opposite cleaved-surface
  // orientation; flip the wrapping numbers on the way in.
  auto w_app = [&](const Vec3& s) -> int {
    const SignVector sv = sector_of(part, s);
    auto it = w_global.find(sv);
    return it == w_global.end() ? 0 : -it->second;
  };

  VertexStarInvariants inv;
  inv.edge_signs.assign(b, 0);
  inv.kink_numbers.assign(b, 0);

  std::vector<std::array<int, 2>> pair_signs(b);  // signs of (E^r, E^{r+1}) from pair r
  for (int r = 0; r < b; ++r) {
    const Vec3& Er = star.edge_dirs[r];
    const Vec3& Er1 = star.edge_dirs[(r + 1) % b];
    const Vec3 Fr = normalized(cross(Er1, Er));

    // The four arcs of the circle through E^r, E^{r+1}, cut at the +-edges.
    const Vec3 e1 = normalized(Er);
    const Vec3 e2 = normalized(cross(Fr, e1));
    auto ang_of = [&](const Vec3& p) { return std::atan2(dot(p, e2), dot(p, e1)); };
    std::vector<std::pair<double, int>> cuts = {
        {ang_of(Er), +1}, {ang_of(-Er), -1}, {ang_of(Er1), +2}, {ang_of(-Er1), -2}};
    std::sort(cuts.begin(), cuts.end());

    std::array<int, 4> delta{};
    for (int m = 0; m < 4; ++m) {
      const double a0 = cuts[m].first;
      const double a1 = (m + 1 < 4) ? cuts[m + 1].first : cuts[0].first + 2.0 * kPi;
      const double mid = (a0 + a1) / 2.0;
      const Vec3 sm = e1 * std::cos(mid) + e2 * std::sin(mid);

      double eps = opt.epsilon_start;
      bool ok = false;
      for (int h = 0; h <= opt.max_halvings && !ok; ++h, eps /= 2.0) {
        const Vec3 sp = normalized(sm + Fr * eps);
        const Vec3 sn = normalized(sm - Fr * eps);
        ok = true;
        for (const auto& F : normals) {
          const double dp = dot(sp, F), dn = dot(sn, F);
          if (std::abs(dp) <= 1e-12 || std::abs(dn) <= 1e-12) { ok = false; break; }
          // Faces not on this probing circle must keep their sign.
          if (std::abs(norm(cross(F, Fr)) ) > 1e-10 && dp * dn < 0) { ok = false; break; }
        }
        if (ok) delta[m] = w_app(sp) - w_app(sn);
      }
      if (!ok)
        fail(ErrorCode::ProbeDegenerate,
             "no valid probe epsilon on arc " + std::to_string(m) + " of pair " +
                 std::to_string(r));
    }

    // Three deltas share the common value -k^r; the odd one marks the arc
    // between e^r E^r and e^{r+1} E^{r+1}.
    int m_star = -1;
    int common = 0;
    bool malformed = false;
    for (int m = 0; m < 4; ++m) {
      int same = 0;
      for (int n = 0; n < 4; ++n)
        if (delta[n] == delta[m]) ++same;
      if (same == 3) {
        common = delta[m];
      } else if (same == 1) {
        if (m_star >= 0) malformed = true;
        m_star = m;
      } else {
        malformed = true;
      }
    }
    if (malformed || m_star < 0)
      fail(ErrorCode::ProbeDegenerate, "probe deltas lack the 3+1 pattern at pair " +
                                           std::to_string(r));
    inv.kink_numbers[r] = -common;

    // Endpoints of the odd arc give the edge signs.
    const int c0 = cuts[m_star].second;
    const int c1 = cuts[(m_star + 1) % 4].second;
    int sr = 0, sr1 = 0;
    for (int c : {c0, c1}) {
      if (std::abs(c) == 1) sr = c > 0 ? 1 : -1;
      else sr1 = c > 0 ? 1 : -1;
    }
    if (sr == 0 || sr1 == 0)
      fail(ErrorCode::ProbeDegenerate, "odd arc endpoints are not an (E^r, E^{r+1}) pair");
    pair_signs[r] = {sr, sr1};
  }

  for (int r = 0; r < b; ++r) {
    const int from_prev = pair_signs[(r + b - 1) % b][1];
    const int from_this = pair_signs[r][0];
    if (from_prev != from_this)
      fail(ErrorCode::InconsistentEdgeSigns,
           "edge " + std::to_string(r) + " sign disagrees between adjacent pairs");
    inv.edge_signs[r] = from_this;
  }

  // Trapped area from the full formula, probed at several transverse points;
  // all probes must agree.
  std::vector<Vec3> signed_edges(b);
  for (int r = 0; r < b; ++r) signed_edges[r] = star.edge_dirs[r] * double(inv.edge_signs[r]);

  double omega = 0.0;
  bool have = false;
  for (int attempt = 0; attempt < 64; ++attempt) {
    // Scan pseudo-random directions, keeping transversality to all faces.
    const double u = std::fmod(0.7548776662466927 * (attempt + 1), 1.0);
    const double v = std::fmod(0.5698402909980532 * (attempt + 1), 1.0);
    const double th = std::acos(1.0 - 2.0 * u), ph = 2.0 * kPi * v;
    const Vec3 s{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
    bool transverse = true;
    for (const auto& F : normals)
      if (std::abs(dot(s, F)) <= 1e-6) { transverse = false; break; }
    if (!transverse) continue;

    double om = 4.0 * kPi * w_app(s);
    for (int r = 0; r < b; ++r) {
      const Vec3 Fr = cross(star.edge_dirs[(r + 1) % b], star.edge_dirs[r]);
      om += 2.0 * kPi * (dot(Fr, s) > 0 ? 1.0 : -1.0) * inv.kink_numbers[r];
    }
    try {
      for (int r = 1; r + 1 < b; ++r) {
        om += spherical_triangle_area_oriented(signed_edges[0], signed_edges[r],
                                               signed_edges[r + 1]);
        om -= 4.0 * kPi * tau_indicator(s, signed_edges[0], signed_edges[r], signed_edges[r + 1]);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::OnTriangleBoundary) continue;
      throw;
    }
    if (!have) {
      omega = om;
      have = true;
    } else if (std::abs(om - omega) > 1e-9) {
      fail(ErrorCode::ProbeDegenerate, "trapped area depends on the probe direction");
    }
  }
  if (!have) fail(ErrorCode::ProbeDegenerate, "no transverse probe direction found");
  inv.trapped_area = omega;
  return inv;
}

OctantTopology octant_from_star_invariants(const Prism& prism, int vertex_id,
                                           const VertexStarInvariants& star) {
  const auto alpha = prism.vertex_signs(vertex_id);
  const int alpha_star = alpha[0] * alpha[1] * alpha[2];
  const VertexStar& vs = prism.polyhedron().vertex_stars()[vertex_id];
  const int b = static_cast<int>(vs.edge_dirs.size());

  OctantTopology t;
  for (int r = 0; r < b; ++r) {
    // Star edge r runs along some axis; star face (r, r+1) is normal to some axis.
    int edge_axis = 0;
    double best = 0.0;
    for (int j = 0; j < 3; ++j)
      if (std::abs(vs.edge_dirs[r][j]) > best) { best = std::abs(vs.edge_dirs[r][j]); edge_axis = j; }
    t.e[edge_axis] = -alpha[edge_axis] * star.edge_signs[r];

    const Vec3 Fr = cross(vs.edge_dirs[(r + 1) % b], vs.edge_dirs[r]);
    int face_axis = 0;
    best = 0.0;
    for (int j = 0; j < 3; ++j)
      if (std::abs(Fr[j]) > best) { best = std::abs(Fr[j]); face_axis = j; }
    t.k[face_axis] = -alpha_star * alpha[face_axis] * star.kink_numbers[r];
  }
  t.omega = alpha_star * star.trapped_area;
  return t;
}

std::pair<double, double> frank_oseen_sandwich(double K1, double K2, double K3, double E_minus,
                                               double kappa, double C) {
  if (K1 < 0 || K2 < 0 || K3 < 0 || E_minus < 0 || C <= 0)
    fail(ErrorCode::NegativeConstant, "elastic constants and E_minus must be nonnegative, C > 0");
  const double kmin = std::min({K1, K2, K3});
  const double kmax = std::max({K1, K2, K3});
  return {kmin * E_minus, C * kmax * kappa * kappa * kappa * E_minus};
}

}  // namespace hb
