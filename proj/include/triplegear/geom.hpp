#pragma once

#include <array>
#include <cmath>

namespace tg {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
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
inline Vec3 normalized(const Vec3& v) { return v / norm(v); }
inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return {}; }
  double& operator()(int r, int c) { return m[3 * r + c]; }
  double operator()(int r, int c) const { return m[3 * r + c]; }

  Vec3 operator*(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }
  Mat3 operator*(const Mat3& o) const;
  Mat3 transposed() const;
};

double frobenius_dist(const Mat3& a, const Mat3& b);

// Orientation-preserving isometry: p -> rotation*p + translation.
// Invariant: rotation orthonormal with det +1 within 1e-12 (renormalized on drift).
struct RigidMotion {
  Mat3 rotation;
  Vec3 translation;

  static RigidMotion identity() { return {}; }
  Vec3 operator()(const Vec3& p) const { return rotation * p + translation; }
  RigidMotion inverse() const;
};

// Applying the result equals applying inner then outer.
RigidMotion compose(const RigidMotion& outer, const RigidMotion& inner);

// Right-handed rotation by angle about the line through point with unit direction.
RigidMotion rotation_about_axis(const Vec3& point, const Vec3& direction, double angle);

// Rotation about the axis composed with translation by advance*direction.
RigidMotion screw_motion(const Vec3& point, const Vec3& direction, double angle, double advance);

// Nearest rotation matrix (polar factor); used when orthonormality drift exceeds 1e-12.
Mat3 orthonormalized(const Mat3& m);
double orthonormality_drift(const Mat3& m);

// Oriented round circle: center + radius*(cos t * u_axis + sin t * v_axis).
// Invariants: u_axis, v_axis unit and orthogonal within 1e-12; radius > 0.
struct Circle3 {
  Vec3 center;
  Vec3 u_axis{1, 0, 0};
  Vec3 v_axis{0, 1, 0};
  double radius = 1;

  Vec3 point(double t) const {
    return center + radius * (std::cos(t) * u_axis + std::sin(t) * v_axis);
  }
  Vec3 normal() const { return cross(u_axis, v_axis); }
};

// Chart angles, both normalized to (-pi, pi].
struct TorusCoords {
  double alpha = 0;  // longitude direction, 0 at u_axis
  double beta = 0;   // meridian direction, 0 on the outside of the tube
};

// Torus around a core circle. Invariant: 0 < tube_radius < core.radius.
struct TorusSpec {
  Circle3 core;
  double tube_radius = 0.25;
};

// center + (R + rho cos(beta)) (cos(alpha) U + sin(alpha) V) + rho sin(beta) n,
// with n = V x U: beta increases toward V x U. This sign reproduces the
// published contact coordinates; see torus_coords_of for the inverse.
Vec3 torus_point(const TorusSpec& t, const TorusCoords& c);

// Chart inversion. Requires p within 1e-9 * core.radius of the surface.
TorusCoords torus_coords_of(const TorusSpec& t, const Vec3& p);

// Chart coordinates (and tube-radial distance) of an arbitrary point; no
// surface requirement. Radial distance is |p - nearest core point|.
struct TubeCoords {
  double alpha = 0, beta = 0, radial = 0;
};
TubeCoords tube_coords_of(const TorusSpec& t, const Vec3& p);

// Chart point at an arbitrary tube-radial distance (ignores t.tube_radius).
Vec3 tube_point(const TorusSpec& t, double alpha, double beta, double radial);

// Curve crossing a longitude p times and a meridian q times:
// alpha = 2 pi q s, beta = 2 pi p s for s in [0,1).
Vec3 pq_curve(const TorusSpec& t, int p, int q, double s);

}  // namespace tg
