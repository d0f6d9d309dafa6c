#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <iosfwd>

namespace hb {

using complexd = std::complex<double>;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  double& operator[](int i) { return (&x)[i]; }
  double operator[](int i) const { return (&x)[i]; }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }

inline Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  return {v.x / n, v.y / n, v.z / n};
}

inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }

// Scalar triple product a.(b x c).
inline double triple(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Signed angle from a to b around the axis n (all three need not be
// orthonormal; a, b are projected onto the plane normal to n).
inline double signed_angle(const Vec3& a, const Vec3& b, const Vec3& n) {
  const Vec3 nn = normalized(n);
  const Vec3 pa = a - nn * dot(a, nn);
  const Vec3 pb = b - nn * dot(b, nn);
  return std::atan2(triple(nn, pa, pb), dot(pa, pb));
}

std::ostream& operator<<(std::ostream& os, const Vec3& v);

}  // namespace hb
