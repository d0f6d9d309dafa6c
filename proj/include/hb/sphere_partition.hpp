#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hb/polyhedron.hpp"

namespace hb {

// Face-indexed tuple of signs sgn(s . F^c). Parallel faces keep separate
// entries even though they share a great circle.
struct SignVector {
  std::vector<int8_t> s;

  bool operator==(const SignVector& o) const { return s == o.s; }
  bool operator<(const SignVector& o) const { return s < o.s; }
  std::string str() const;  // "+-+..." ordered by face index
};

struct ArcSegment {
  int circle = 0;
  Vec3 a, b;  // endpoints, unit vectors
};

struct Sector {
  SignVector sign_vector;
  double area = 0.0;  // steradians
  std::vector<ArcSegment> boundary;
  Vec3 interior_sample;
};

class SectorPartition {
 public:
  const std::vector<Vec3>& circle_normals() const { return circle_normals_; }
  const std::vector<int>& face_to_circle() const { return face_to_circle_; }
  const std::vector<Sector>& sectors() const { return sectors_; }
  bool approximate() const { return approximate_; }

  int sector_index(const SignVector& sv) const;     // -1 if absent
  double area_of(const SignVector& sv) const;

  friend SectorPartition enumerate_sectors(const Polyhedron& poly);

 private:
  std::vector<Vec3> circle_normals_;   // one representative per parallel face class
  std::vector<int> face_to_circle_;
  std::vector<Sector> sectors_;
  std::vector<Vec3> face_normals_;     // copy, for sector_of
  bool approximate_ = false;
};

SectorPartition enumerate_sectors(const Polyhedron& poly);

// Sign vector of a direction transverse to all face circles.
SignVector sector_of(const SectorPartition& part, const Vec3& s);
SignVector sign_vector_of(const std::vector<Vec3>& face_normals, const Vec3& s,
                          double tol = 1e-12);

// Oriented area of the spherical triangle (a, b, c), in (-pi, pi); the sign
// is sgn(a.(b x c)).
double spherical_triangle_area_oriented(const Vec3& a, const Vec3& b, const Vec3& c);

// 0 if s lies outside the triangle, else sgn(a.(b x c)).
int tau_indicator(const Vec3& s, const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace hb
