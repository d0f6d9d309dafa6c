#include "hb/polyhedron.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

#include "hb/error.hpp"

namespace hb {

std::ostream& operator<<(std::ostream& os, const Vec3& v) {
  return os << "(" << v.x << ", " << v.y << ", " << v.z << ")";
}

namespace {

constexpr double kRelTol = 1e-12;

// Newell's method; robust against near-degenerate cycles.
Vec3 newell_normal(const std::vector<Vec3>& vs, const std::vector<int>& face) {
  Vec3 n{0, 0, 0};
  const int m = static_cast<int>(face.size());
  for (int i = 0; i < m; ++i) {
    const Vec3& a = vs[face[i]];
    const Vec3& b = vs[face[(i + 1) % m]];
    n.x += (a.y - b.y) * (a.z + b.z);
    n.y += (a.z - b.z) * (a.x + b.x);
    n.z += (a.x - b.x) * (a.y + b.y);
  }
  return n;
}

}  // namespace

Polyhedron build_polyhedron(const std::vector<Vec3>& vertices,
                            const std::vector<std::vector<int>>& faces) {
  if (vertices.size() < 4) fail(ErrorCode::DegenerateFace, "need at least 4 vertices");
  Polyhedron P;
  P.vertices_ = vertices;
  P.faces_ = faces;

  Vec3 centroid{0, 0, 0};
  for (const auto& v : vertices) centroid += v;
  centroid = centroid / static_cast<double>(vertices.size());
  P.centroid_ = centroid;

  double diam = 0.0;
  for (size_t i = 0; i < vertices.size(); ++i)
    for (size_t j = i + 1; j < vertices.size(); ++j)
      diam = std::max(diam, dist(vertices[i], vertices[j]));
  P.diameter_ = diam;
  const double tol = kRelTol * diam;

  for (const auto& face : faces) {
    if (face.size() < 3) fail(ErrorCode::DegenerateFace, "face with fewer than 3 vertices");
    for (int idx : face)
      if (idx < 0 || idx >= static_cast<int>(vertices.size()))
        fail(ErrorCode::ParseError, "face index out of range");

    Vec3 n = newell_normal(vertices, face);
    const double a2 = norm(n);  // twice the polygon area
    if (a2 <= tol * diam) fail(ErrorCode::DegenerateFace, "collinear face cycle");
    n = n / a2;

    // Orient outward against the centroid.
    const Vec3& p0 = vertices[face[0]];
    if (dot(n, p0 - centroid) < 0) n = -n;

    for (int idx : face)
      if (std::abs(dot(n, vertices[idx] - p0)) > tol)
        fail(ErrorCode::NonPlanarFace, "face not planar to tolerance");

    P.face_normals_.push_back(n);
    P.face_offsets_.push_back(dot(n, p0));
    P.face_areas_.push_back(a2 / 2.0);
  }

  // Convexity: every vertex on the non-positive side of every face plane.
  for (size_t f = 0; f < faces.size(); ++f)
    for (const auto& v : vertices)
      if (dot(P.face_normals_[f], v) - P.face_offsets_[f] > tol)
        fail(ErrorCode::NonConvex, "vertex outside a face plane");

  // Collect the edges at each vertex from the face cycles.
  std::vector<std::set<int>> nbrs(vertices.size());
  std::map<std::pair<int, int>, std::vector<int>> edge_faces;
  for (size_t f = 0; f < faces.size(); ++f) {
    const auto& face = faces[f];
    const int m = static_cast<int>(face.size());
    for (int i = 0; i < m; ++i) {
      int a = face[i], b = face[(i + 1) % m];
      nbrs[a].insert(b);
      nbrs[b].insert(a);
      edge_faces[{std::min(a, b), std::max(a, b)}].push_back(static_cast<int>(f));
    }
  }
  for (const auto& [e, fs] : edge_faces)
    if (fs.size() != 2) fail(ErrorCode::DegenerateFace, "edge not shared by exactly 2 faces");

  // Vertex stars: sort edges by angle about the interior ray, then pick the
  // cyclic orientation for which E[r+1] x E[r] reproduces outward normals.
  P.vertex_stars_.resize(vertices.size());
  for (size_t a = 0; a < vertices.size(); ++a) {
    const Vec3 v = vertices[a];
    const Vec3 d = normalized(centroid - v);
    // Reference direction in the plane normal to d: the axis least parallel to d.
    int k = 0;
    if (std::abs(d.y) < std::abs(d[k])) k = 1;
    if (std::abs(d.z) < std::abs(d[k])) k = 2;
    Vec3 axis{0, 0, 0};
    axis[k] = 1.0;
    const Vec3 ref = normalized(axis - d * dot(axis, d));
    std::vector<std::pair<double, int>> ang;
    for (int b : nbrs[a]) {
      const Vec3 e = normalized(vertices[b] - v);
      ang.push_back({signed_angle(ref, e, d), b});
    }
    if (ang.size() < 3) fail(ErrorCode::DegenerateFace, "vertex star with fewer than 3 edges");
    std::sort(ang.begin(), ang.end());

    VertexStar star;
    for (auto& [angle, b] : ang) {
      star.edge_dirs.push_back(normalized(vertices[b] - v));
      star.edge_to_vertex.push_back(b);
    }

    auto match_face = [&](const Vec3& e1, const Vec3& e2) -> int {
      const Vec3 n = cross(e2, e1);
      if (norm(n) < 1e-14) return -1;
      const Vec3 nn = normalized(n);
      for (int f = 0; f < P.n_faces(); ++f)
        if (norm(nn - P.face_normals_[f]) < 1e-9) return f;
      return -1;
    };

    const int b = static_cast<int>(star.edge_dirs.size());
    if (match_face(star.edge_dirs[0], star.edge_dirs[1 % b]) < 0) {
      std::reverse(star.edge_dirs.begin(), star.edge_dirs.end());
      std::reverse(star.edge_to_vertex.begin(), star.edge_to_vertex.end());
    }
    for (int r = 0; r < b; ++r) {
      const int f = match_face(star.edge_dirs[r], star.edge_dirs[(r + 1) % b]);
      if (f < 0) fail(ErrorCode::DegenerateFace, "consecutive star edges do not span a face");
      star.pair_face.push_back(f);
    }
    P.vertex_stars_[a] = std::move(star);
  }
  return P;
}

Prism::Prism(double Lx, double Ly, double Lz) : half_{Lx / 2, Ly / 2, Lz / 2} {
  if (!(Lx > 0 && Ly > 0 && Lz > 0)) fail(ErrorCode::NonPositive, "side lengths must be positive");
  if (!(Lx >= Ly && Ly >= Lz)) fail(ErrorCode::BadOrdering, "require L_x >= L_y >= L_z");

  std::vector<Vec3> vs(8);
  for (int id = 0; id < 8; ++id) {
    auto s = vertex_signs(id);
    vs[id] = {s[0] * half_[0], s[1] * half_[1], s[2] * half_[2]};
  }
  // Faces with outward-oriented cycles (orientation re-derived by the builder anyway).
  std::vector<std::vector<int>> fs = {
      {1, 3, 7, 5},  // x = +l_x
      {0, 4, 6, 2},  // x = -l_x
      {2, 6, 7, 3},  // y = +l_y
      {0, 1, 5, 4},  // y = -l_y
      {4, 5, 7, 6},  // z = +l_z
      {0, 2, 3, 1},  // z = -l_z
  };
  poly_ = build_polyhedron(vs, fs);
}

Prism rectangular_prism(double Lx, double Ly, double Lz) { return Prism(Lx, Ly, Lz); }

CleavedFace cleaved_face(const Prism& prism, int vertex_id) {
  CleavedFace cf;
  cf.vertex_id = vertex_id;
  const Vec3 v = prism.vertex(vertex_id);
  cf.corners = {Vec3{0, v.y, v.z}, Vec3{v.x, 0, v.z}, Vec3{v.x, v.y, 0}};
  cf.normal_unnormalized = {1.0 / v.x, 1.0 / v.y, 1.0 / v.z};
  cf.distance_to_origin = 2.0 / norm(cf.normal_unnormalized);
  return cf;
}

double ray_exit_distance(const CleavedFace& cf, const Vec3& s) {
  // The octant cone at the vertex: every component of s opposes the vertex sign.
  const Vec3& C = cf.normal_unnormalized;
  if (C.x * s.x > 0 || C.y * s.y > 0 || C.z * s.z > 0)
    fail(ErrorCode::OutsideCone, "direction not in the vertex octant");
  return 1.0 / std::abs(dot(C, s));
}

FaceFrame face_frame(const Prism& prism, int axis, int tau) {
  auto unit = [](int k) { Vec3 u{0, 0, 0}; u[k] = 1.0; return u; };
  const int p = (axis + 1) % 3, q = (axis + 2) % 3;
  FaceFrame fr;
  fr.p = unit(p);
  fr.q = unit(q) * static_cast<double>(tau);
  fr.n = unit(axis) * static_cast<double>(tau);
  fr.lp = prism.half_length(p);
  fr.lq = prism.half_length(q);
  fr.ln = prism.half_length(axis);
  return fr;
}

double TruncatedFace::boundary_radius(double phi) const {
  return lp * lq / (lq * std::abs(std::cos(phi)) + lp * std::abs(std::sin(phi)));
}

TruncatedFace truncated_face(const Prism& prism, int axis, int tau) {
  TruncatedFace tf;
  tf.axis = axis;
  tf.tau = tau;
  const FaceFrame fr = face_frame(prism, axis, tau);
  tf.lp = fr.lp;
  tf.lq = fr.lq;
  const Vec3 c = fr.n * fr.ln;
  tf.corners = {c + fr.p * fr.lp, c + fr.q * fr.lq, c - fr.p * fr.lp, c - fr.q * fr.lq};
  return tf;
}

}  // namespace hb
