#include "hb/sphere_partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "hb/error.hpp"

namespace hb {

namespace {

constexpr double kMergeTol = 1e-10;      // angular merge distance for concurrent circles
constexpr double kIncidenceTol = 2e-10;  // point-on-circle tolerance
constexpr double kAmbiguousTol = 1e-8;   // incidence gap that signals tolerance failure

struct HalfEdge {
  int circle = 0;
  int from = 0, to = 0;   // merged point ids
  int dir = +1;           // +1: increasing angle around the circle normal
  int twin = -1;
  Vec3 tangent_at(const Vec3& p, const Vec3& u) const {
    return normalized(cross(u, p)) * static_cast<double>(dir);
  }
};

}  // namespace

std::string SignVector::str() const {
  std::string out;
  out.reserve(s.size());
  for (int8_t v : s) out.push_back(v > 0 ? '+' : '-');
  return out;
}

SignVector sign_vector_of(const std::vector<Vec3>& face_normals, const Vec3& s, double tol) {
  SignVector sv;
  sv.s.reserve(face_normals.size());
  for (const auto& F : face_normals) {
    const double d = dot(s, F);
    if (std::abs(d) <= tol) fail(ErrorCode::OnBoundary, "direction on a face great circle");
    sv.s.push_back(d > 0 ? 1 : -1);
  }
  return sv;
}

SignVector sector_of(const SectorPartition& part, const Vec3& s) {
  return sign_vector_of(part.face_normals_, s);
}

int SectorPartition::sector_index(const SignVector& sv) const {
  for (size_t i = 0; i < sectors_.size(); ++i)
    if (sectors_[i].sign_vector == sv) return static_cast<int>(i);
  return -1;
}

double SectorPartition::area_of(const SignVector& sv) const {
  const int i = sector_index(sv);
  if (i < 0) fail(ErrorCode::UnknownSector, "sign vector not in partition: " + sv.str());
  return sectors_[i].area;
}

double spherical_triangle_area_oriented(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double t = triple(a, b, c);
  const double d = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
  if (std::abs(t) < 1e-12)
    fail(ErrorCode::DegenerateTriangle, "vertices coplanar with the origin");
  if (dot(a + b, a + b) < 1e-24 || dot(b + c, b + c) < 1e-24 || dot(c + a, c + a) < 1e-24)
    fail(ErrorCode::DegenerateTriangle, "antipodal vertex pair");
  return 2.0 * std::atan2(t, d);
}

int tau_indicator(const Vec3& s, const Vec3& a, const Vec3& b, const Vec3& c) {
  const double orient = triple(a, b, c);
  if (std::abs(orient) < 1e-12)
    fail(ErrorCode::DegenerateTriangle, "vertices coplanar with the origin");
  const Vec3 pts[3] = {a, b, c};
  for (int i = 0; i < 3; ++i) {
    const Vec3& u = pts[i];
    const Vec3& v = pts[(i + 1) % 3];
    const Vec3& w = pts[(i + 2) % 3];
    const double side_s = triple(s, u, v);
    const double side_w = triple(w, u, v);
    if (std::abs(side_s) < 1e-12)
      fail(ErrorCode::OnTriangleBoundary, "probe on a triangle side plane");
    if (side_s * side_w < 0) return 0;
  }
  return orient > 0 ? 1 : -1;
}

namespace {

SectorPartition census_fallback(const Polyhedron& poly, SectorPartition part) {
  // Sign-vector census on a Fibonacci sphere grid with Monte-Carlo areas.
  part.sectors_.clear();
  part.approximate_ = true;
  const int N = 1'000'000;
  const double ga = kPi * (3.0 - std::sqrt(5.0));
  std::map<SignVector, std::pair<long, Vec3>> census;
  for (int i = 0; i < N; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / N;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = ga * i;
    const Vec3 s{r * std::cos(phi), r * std::sin(phi), z};
    SignVector sv;
    sv.s.reserve(poly.n_faces());
    bool boundary = false;
    for (const auto& F : poly.face_normals()) {
      const double d = dot(s, F);
      if (std::abs(d) <= 1e-9) { boundary = true; break; }
      sv.s.push_back(d > 0 ? 1 : -1);
    }
    if (boundary) continue;
    auto& e = census[sv];
    e.first++;
    e.second += s;
  }
  for (auto& [sv, cnt] : census) {
    Sector sec;
    sec.sign_vector = sv;
    sec.area = 4.0 * kPi * static_cast<double>(cnt.first) / N;
    sec.interior_sample = normalized(cnt.second);
    part.sectors_.push_back(std::move(sec));
  }
  return part;
}

}  // namespace

SectorPartition enumerate_sectors(const Polyhedron& poly) {
  SectorPartition part;
  part.face_normals_ = poly.face_normals();

  // Distinct circles: face normals up to sign.
  for (int f = 0; f < poly.n_faces(); ++f) {
    const Vec3& n = poly.face_normals()[f];
    int found = -1;
    for (size_t c = 0; c < part.circle_normals_.size(); ++c) {
      const Vec3& u = part.circle_normals_[c];
      if (norm(cross(u, n)) < 1e-12) { found = static_cast<int>(c); break; }
    }
    if (found < 0) {
      part.circle_normals_.push_back(n);
      found = static_cast<int>(part.circle_normals_.size()) - 1;
    }
    part.face_to_circle_.push_back(found);
  }
  const auto& circles = part.circle_normals_;
  const int nc = static_cast<int>(circles.size());

  // Pairwise intersections, merged within the angular tolerance.
  std::vector<Vec3> points;
  auto add_point = [&](const Vec3& p) {
    for (const auto& q : points)
      if (dist(p, q) < kMergeTol) return;
    points.push_back(p);
  };
  for (int i = 0; i < nc; ++i)
    for (int j = i + 1; j < nc; ++j) {
      const Vec3 x = cross(circles[i], circles[j]);
      const double nx = norm(x);
      if (nx < 1e-12) continue;  // same circle; already deduplicated
      add_point(x / nx);
      add_point(x / -nx);
    }

  // Split each circle into arcs at its incident points.
  std::vector<HalfEdge> hedges;
  bool degenerate = false;
  for (int c = 0; c < nc && !degenerate; ++c) {
    const Vec3 u = circles[c];
    int k = 0;
    if (std::abs(u.y) < std::abs(u[k])) k = 1;
    if (std::abs(u.z) < std::abs(u[k])) k = 2;
    Vec3 axis{0, 0, 0};
    axis[k] = 1.0;
    const Vec3 e1 = normalized(axis - u * dot(axis, u));
    const Vec3 e2 = cross(u, e1);

    std::vector<std::pair<double, int>> on_circle;
    for (size_t p = 0; p < points.size(); ++p) {
      const double d = std::abs(dot(points[p], u));
      if (d < kIncidenceTol)
        on_circle.push_back({std::atan2(dot(points[p], e2), dot(points[p], e1)), static_cast<int>(p)});
      else if (d < kAmbiguousTol)
        degenerate = true;  // tolerance gap: cannot decide incidence
    }
    if (on_circle.size() < 2) degenerate = true;
    std::sort(on_circle.begin(), on_circle.end());
    const int m = static_cast<int>(on_circle.size());
    for (int i = 0; i < m; ++i) {
      const int a = on_circle[i].second;
      const int b = on_circle[(i + 1) % m].second;
      const int base = static_cast<int>(hedges.size());
      hedges.push_back({c, a, b, +1, base + 1});
      hedges.push_back({c, b, a, -1, base});
    }
  }

  if (!degenerate) {
    // Trace cells keeping the region on the left of each directed arc.
    std::vector<std::vector<int>> outgoing(points.size());
    for (size_t h = 0; h < hedges.size(); ++h) outgoing[hedges[h].from].push_back(static_cast<int>(h));

    std::vector<int> next(hedges.size(), -1);
    for (size_t h = 0; h < hedges.size(); ++h) {
      const HalfEdge& he = hedges[h];
      const Vec3 p = points[he.to];
      const Vec3 t_in = he.tangent_at(p, circles[he.circle]);
      double best = -10.0;
      int pick = -1;
      for (int g : outgoing[he.to]) {
        if (g == he.twin) continue;
        const Vec3 t_out = hedges[g].tangent_at(p, circles[hedges[g].circle]);
        const double a = signed_angle(t_in, t_out, p);
        if (a > best) { best = a; pick = g; }
      }
      next[h] = pick;
    }

    std::vector<char> used(hedges.size(), 0);
    double total_area = 0.0;
    for (size_t h0 = 0; h0 < hedges.size() && !degenerate; ++h0) {
      if (used[h0]) continue;
      Sector sec;
      double turn_sum = 0.0;
      std::vector<int> cycle;
      int h = static_cast<int>(h0);
      do {
        used[h] = 1;
        cycle.push_back(h);
        const int g = next[h];
        if (g < 0 || (used[g] && g != static_cast<int>(h0))) { degenerate = true; break; }
        const HalfEdge& he = hedges[h];
        const Vec3 p = points[he.to];
        turn_sum += signed_angle(he.tangent_at(p, circles[he.circle]),
                                 hedges[g].tangent_at(p, circles[hedges[g].circle]), p);
        h = g;
      } while (h != static_cast<int>(h0) && !degenerate);
      if (degenerate) break;

      sec.area = 2.0 * kPi - turn_sum;
      Vec3 avg{0, 0, 0};
      std::vector<Vec3> nudges;
      for (int hh : cycle) {
        const HalfEdge& he = hedges[hh];
        sec.boundary.push_back({he.circle, points[he.from], points[he.to]});
        // Midpoint of the (possibly major) arc from 'from' to 'to' along dir.
        const Vec3 u = circles[he.circle];
        const Vec3 a = points[he.from];
        Vec3 e1 = a - u * dot(a, u);
        e1 = normalized(e1);
        const Vec3 e2 = cross(u, e1);
        const Vec3 b = points[he.to];
        double ang = std::atan2(dot(b, e2), dot(b, e1));
        if (he.dir > 0 && ang <= 0) ang += 2.0 * kPi;
        if (he.dir < 0 && ang >= 0) ang -= 2.0 * kPi;
        const double half = ang / 2.0;
        const Vec3 mid = e1 * std::cos(half) + e2 * std::sin(half) + u * dot(a, u);
        const Vec3 midn = normalized(mid);
        const Vec3 left = cross(midn, he.tangent_at(midn, u));
        nudges.push_back(normalized(midn + left * 1e-7));
        avg += points[he.from];
      }

      // Region sign vector by consensus of the nudged arc midpoints.
      SignVector sv;
      try {
        sv = sign_vector_of(part.face_normals_, nudges[0], 1e-12);
        for (size_t i = 1; i < nudges.size(); ++i)
          if (!(sign_vector_of(part.face_normals_, nudges[i], 1e-12) == sv)) degenerate = true;
      } catch (const Error&) {
        degenerate = true;
      }
      if (degenerate) break;
      sec.sign_vector = sv;

      // Interior sample: best margin among the vertex average and the nudges.
      auto margin = [&](const Vec3& s) {
        double m = 2.0;
        for (const auto& F : part.face_normals_) m = std::min(m, std::abs(dot(s, F)));
        return m;
      };
      nudges.push_back(normalized(avg));
      double best_m = -1.0;
      for (const auto& cand : nudges) {
        if (norm(cand) < 0.5) continue;
        try {
          if (!(sign_vector_of(part.face_normals_, cand, 1e-12) == sv)) continue;
        } catch (const Error&) {
          continue;
        }
        const double m = margin(cand);
        if (m > best_m) { best_m = m; sec.interior_sample = cand; }
      }
      if (best_m < 1e-9) degenerate = true;

      total_area += sec.area;
      part.sectors_.push_back(std::move(sec));
    }

    // Validation gate before accepting the exact arrangement.
    if (!degenerate) {
      if (std::abs(total_area - 4.0 * kPi) > 1e-9) degenerate = true;
      const int f = poly.n_faces();
      if (static_cast<int>(part.sectors_.size()) > f * f - f + 2) degenerate = true;
      std::vector<SignVector> svs;
      for (const auto& s : part.sectors_) svs.push_back(s.sign_vector);
      std::sort(svs.begin(), svs.end());
      if (std::adjacent_find(svs.begin(), svs.end()) != svs.end()) degenerate = true;
    }
  }

  if (degenerate) return census_fallback(poly, std::move(part));
  return part;
}

}  // namespace hb
