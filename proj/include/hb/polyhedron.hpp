#pragma once

#include <array>
#include <string>
#include <vector>

#include "hb/geom.hpp"

namespace hb {

// Edges of a vertex star, ordered so that consecutive pairs span the faces
// at that vertex: normalized(E[r+1] x E[r]) is the outward normal of the
// face containing both edges (indices cyclic).
struct VertexStar {
  std::vector<Vec3> edge_dirs;       // unit vectors away from the vertex
  std::vector<int> edge_to_vertex;   // far endpoint of each edge
  std::vector<int> pair_face;        // face spanned by (E[r], E[r+1])
};

class Polyhedron {
 public:
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::vector<int>>& faces() const { return faces_; }
  const std::vector<Vec3>& face_normals() const { return face_normals_; }
  const std::vector<double>& face_offsets() const { return face_offsets_; }  // n.x = offset on face
  const std::vector<VertexStar>& vertex_stars() const { return vertex_stars_; }

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_faces() const { return static_cast<int>(faces_.size()); }

  double diameter() const { return diameter_; }
  Vec3 centroid() const { return centroid_; }
  double face_area(int f) const { return face_areas_[f]; }

  friend Polyhedron build_polyhedron(const std::vector<Vec3>& vertices,
                                     const std::vector<std::vector<int>>& faces);

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::vector<int>> faces_;
  std::vector<Vec3> face_normals_;
  std::vector<double> face_offsets_;
  std::vector<double> face_areas_;
  std::vector<VertexStar> vertex_stars_;
  Vec3 centroid_;
  double diameter_ = 0.0;
};

Polyhedron build_polyhedron(const std::vector<Vec3>& vertices,
                            const std::vector<std::vector<int>>& faces);

// Rectangular prism centred at the origin with half-lengths l_x >= l_y >= l_z.
// Vertices are the 8 sign combinations (+-l_x, +-l_y, +-l_z); vertex ids
// order the signs as bits (bit 0 = x positive, bit 1 = y, bit 2 = z).
class Prism {
 public:
  Prism(double Lx, double Ly, double Lz);

  double lx() const { return half_[0]; }
  double ly() const { return half_[1]; }
  double lz() const { return half_[2]; }
  double half_length(int axis) const { return half_[axis]; }
  double aspect_ratio() const { return half_[0] / half_[2]; }

  const Polyhedron& polyhedron() const { return poly_; }

  static int vertex_id(int sx, int sy, int sz) {
    return (sx > 0 ? 1 : 0) | (sy > 0 ? 2 : 0) | (sz > 0 ? 4 : 0);
  }
  std::array<int, 3> vertex_signs(int id) const {
    return {(id & 1) ? 1 : -1, (id & 2) ? 1 : -1, (id & 4) ? 1 : -1};
  }
  Vec3 vertex(int id) const {
    auto s = vertex_signs(id);
    return {s[0] * half_[0], s[1] * half_[1], s[2] * half_[2]};
  }

 private:
  std::array<double, 3> half_;
  Polyhedron poly_;
};

Prism rectangular_prism(double Lx, double Ly, double Lz);

// Triangle through the midpoints of the three edges at a prism vertex.
struct CleavedFace {
  int vertex_id = 0;
  std::array<Vec3, 3> corners;   // midpoints of the edges along x, y, z
  Vec3 normal_unnormalized;      // C^a = (1/v_x, 1/v_y, 1/v_z); C.c = 2 on the face
  double distance_to_origin = 0.0;
};

CleavedFace cleaved_face(const Prism& prism, int vertex_id);

// Distance from the prism vertex to its cleaved face along the unit
// direction s; s must point into the solid octant cone at the vertex.
double ray_exit_distance(const CleavedFace& cf, const Vec3& s);

// Rhombus in face (axis, tau) through the midpoints of that face's edges.
struct TruncatedFace {
  int axis = 2;    // 0=x, 1=y, 2=z
  int tau = 1;     // +-1, side of the axis
  std::array<Vec3, 4> corners;
  // In-face polar radius of the rhombus boundary; phi measured from the
  // first in-face axis of the face frame.
  double boundary_radius(double phi) const;
  double lp = 0.0, lq = 0.0;  // half-lengths along the in-face axes
};

TruncatedFace truncated_face(const Prism& prism, int axis, int tau);

// Right-handed frame (p, q, n) of face (axis, tau): n is the outward
// normal, (p, q) span the face so that the four face vertices sit at
// (+-lp, +-lq) in (p, q) coordinates.
struct FaceFrame {
  Vec3 p, q, n;
  double lp, lq, ln;
};
FaceFrame face_frame(const Prism& prism, int axis, int tau);

}  // namespace hb
