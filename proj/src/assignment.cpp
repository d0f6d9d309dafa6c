#include "hb/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hb/error.hpp"

namespace hb {

std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
  // Jonker-Volgenant style shortest augmenting path with potentials.
  // Rows and columns are 1-based internally; ties resolve to the lowest index.
  const int n = static_cast<int>(cost.size());
  if (n == 0) return {};
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
        if (minv[j] < delta) { delta = minv[j]; j1 = j; }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) { u[p[j]] += delta; v[j] -= delta; }
        else minv[j] -= delta;
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> match(n, -1);
  for (int j = 1; j <= n; ++j) match[p[j] - 1] = j - 1;
  return match;
}

ConnectionResult minimal_connection(const std::vector<Vec3>& positives,
                                    const std::vector<Vec3>& negatives) {
  if (positives.size() != negatives.size())
    fail(ErrorCode::CardinalityMismatch, "positive and negative multisets differ in size");
  ConnectionResult res;
  const int m = static_cast<int>(positives.size());
  if (m == 0) return res;
  std::vector<std::vector<double>> cost(m, std::vector<double>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) cost[i][j] = dist(positives[i], negatives[j]);
  res.matching = solve_assignment(cost);
  res.pair_dists.resize(m);
  for (int i = 0; i < m; ++i) {
    res.pair_dists[i] = cost[i][res.matching[i]];
    res.length += res.pair_dists[i];
  }
  return res;
}

namespace {

LowerBoundReport lower_bound_impl(const Polyhedron& poly, const SectorPartition& part,
                                  const TangentTopology& topo) {
  LowerBoundReport rep;
  for (const auto& sec : part.sectors()) {
    std::vector<Vec3> pos, neg;
    for (size_t a = 0; a < topo.w.size(); ++a) {
      const int w = topo.wrapping(static_cast<int>(a), sec.sign_vector);
      for (int c = 0; c < std::abs(w); ++c)
        (w > 0 ? pos : neg).push_back(poly.vertices()[a]);
    }
    if (pos.size() != neg.size())
      fail(ErrorCode::InadmissibleTopology,
           "sector " + sec.sign_vector.str() + " has unbalanced wrapping numbers");
    if (pos.empty()) continue;
    const ConnectionResult con = minimal_connection(pos, neg);
    SectorBound sb;
    sb.sigma = sec.sign_vector;
    sb.area = sec.area;
    sb.length = con.length;
    for (size_t i = 0; i < pos.size(); ++i) sb.pairs.push_back({pos[i], neg[con.matching[i]]});
    rep.E_minus += 2.0 * sb.area * sb.length;
    rep.sectors.push_back(std::move(sb));
  }
  return rep;
}

}  // namespace

LowerBoundReport lower_bound_energy(const Polyhedron& poly, const SectorPartition& part,
                                    const TangentTopology& topo, bool check_admissibility) {
  if (check_admissibility) {
    const auto rep = check_admissible(poly, part, topo);
    if (!rep.pass)
      fail(ErrorCode::InadmissibleTopology, rep.violations.empty() ? "" : rep.violations[0]);
  }
  return lower_bound_impl(poly, part, topo);
}

LowerBoundReport lower_bound_energy(const Prism& prism, const SectorPartition& part,
                                    const TangentTopology& topo, bool check_admissibility) {
  if (check_admissibility) {
    const auto rep = check_admissible(prism, part, topo);
    if (!rep.pass)
      fail(ErrorCode::InadmissibleTopology, rep.violations.empty() ? "" : rep.violations[0]);
  }
  return lower_bound_impl(prism.polyhedron(), part, topo);
}

double dual_feasible_value(const Polyhedron& poly, const TangentTopology& topo,
                           const SignVector& sigma, const std::vector<double>& xi) {
  const auto& vs = poly.vertices();
  if (xi.size() != vs.size()) fail(ErrorCode::InfeasiblePotentials, "potential count mismatch");
  const double tol = 1e-9 * poly.diameter();
  for (size_t a = 0; a < vs.size(); ++a)
    for (size_t b = a + 1; b < vs.size(); ++b)
      if (std::abs(xi[a] - xi[b]) > dist(vs[a], vs[b]) + tol)
        fail(ErrorCode::InfeasiblePotentials, "1-Lipschitz constraint violated");
  double val = 0.0;
  for (size_t a = 0; a < vs.size(); ++a)
    val += xi[a] * topo.wrapping(static_cast<int>(a), sigma);
  return val;
}

std::vector<double> project_feasible_potentials(const Polyhedron& poly, std::vector<double> xi) {
  const auto& vs = poly.vertices();
  for (size_t pass = 0; pass < vs.size(); ++pass) {
    bool changed = false;
    for (size_t a = 0; a < vs.size(); ++a)
      for (size_t b = 0; b < vs.size(); ++b) {
        const double cap = xi[b] + dist(vs[a], vs[b]);
        if (xi[a] > cap) { xi[a] = cap; changed = true; }
      }
    if (!changed) break;
  }
  return xi;
}

double bcl_energy(const std::vector<Vec3>& points, const std::vector<int>& degrees) {
  if (points.size() != degrees.size()) fail(ErrorCode::UnbalancedDegrees, "size mismatch");
  long total = 0;
  for (int d : degrees) total += d;
  if (total != 0) fail(ErrorCode::UnbalancedDegrees, "degrees must sum to zero");
  std::vector<Vec3> pos, neg;
  for (size_t i = 0; i < points.size(); ++i)
    for (int c = 0; c < std::abs(degrees[i]); ++c)
      (degrees[i] > 0 ? pos : neg).push_back(points[i]);
  return 8.0 * kPi * minimal_connection(pos, neg).length;
}

double prism_floor(const TangentTopology& topo, double Lz) {
  long total = 0;
  for (const auto& wm : topo.w)
    for (const auto& [sv, w] : wm) total += std::abs(w);
  return kPi / 2.0 * Lz * static_cast<double>(total);
}

}  // namespace hb
