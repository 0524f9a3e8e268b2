#include "triplegear/geom.hpp"

#include <cmath>

#include "triplegear/error.hpp"

namespace tg {

double wrap_angle(double a) {
  double w = std::remainder(a, 2 * M_PI);
  if (w <= -M_PI) w += 2 * M_PI;  // remainder returns [-pi, pi]; fold -pi to +pi
  return w;
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  return r;
}

Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
  return r;
}

double frobenius_dist(const Mat3& a, const Mat3& b) {
  double s = 0;
  for (int i = 0; i < 9; ++i) {
    double d = a.m[i] - b.m[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double orthonormality_drift(const Mat3& m) {
  Mat3 g = m.transposed() * m;
  return frobenius_dist(g, Mat3::identity());
}

Mat3 orthonormalized(const Mat3& m) {
  // Polar factor via Higham's Newton iteration: X <- (X + X^-T)/2.
  // Converges quadratically for matrices near a rotation.
  Mat3 x = m;
  for (int it = 0; it < 12; ++it) {
    Mat3 xt = x.transposed();
    // invert xt (adjugate / det)
    double a = xt(0, 0), b = xt(0, 1), c = xt(0, 2);
    double d = xt(1, 0), e = xt(1, 1), f = xt(1, 2);
    double g = xt(2, 0), h = xt(2, 1), i = xt(2, 2);
    double det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    Mat3 inv;
    inv(0, 0) = (e * i - f * h) / det;
    inv(0, 1) = (c * h - b * i) / det;
    inv(0, 2) = (b * f - c * e) / det;
    inv(1, 0) = (f * g - d * i) / det;
    inv(1, 1) = (a * i - c * g) / det;
    inv(1, 2) = (c * d - a * f) / det;
    inv(2, 0) = (d * h - e * g) / det;
    inv(2, 1) = (b * g - a * h) / det;
    inv(2, 2) = (a * e - b * d) / det;
    Mat3 next;
    for (int k = 0; k < 9; ++k) next.m[k] = 0.5 * (x.m[k] + inv.m[k]);
    if (frobenius_dist(next, x) < 1e-15) return next;
    x = next;
  }
  return x;
}

RigidMotion RigidMotion::inverse() const {
  RigidMotion r;
  r.rotation = rotation.transposed();
  r.translation = -(r.rotation * translation);
  return r;
}

RigidMotion compose(const RigidMotion& outer, const RigidMotion& inner) {
  RigidMotion r;
  r.rotation = outer.rotation * inner.rotation;
  r.translation = outer.rotation * inner.translation + outer.translation;
  if (orthonormality_drift(r.rotation) > 1e-12) r.rotation = orthonormalized(r.rotation);
  return r;
}

RigidMotion rotation_about_axis(const Vec3& point, const Vec3& direction, double angle) {
  double len = norm(direction);
  if (len < 1e-300) throw Error(ErrorCode::InvalidInput, "rotation_about_axis: zero direction");
  Vec3 d = direction / len;
  double c = std::cos(angle), s = std::sin(angle), t = 1 - c;
  Mat3 r;
  r(0, 0) = t * d.x * d.x + c;
  r(0, 1) = t * d.x * d.y - s * d.z;
  r(0, 2) = t * d.x * d.z + s * d.y;
  r(1, 0) = t * d.x * d.y + s * d.z;
  r(1, 1) = t * d.y * d.y + c;
  r(1, 2) = t * d.y * d.z - s * d.x;
  r(2, 0) = t * d.x * d.z - s * d.y;
  r(2, 1) = t * d.y * d.z + s * d.x;
  r(2, 2) = t * d.z * d.z + c;
  RigidMotion m;
  m.rotation = r;
  m.translation = point - r * point;
  return m;
}

RigidMotion screw_motion(const Vec3& point, const Vec3& direction, double angle, double advance) {
  double len = norm(direction);
  if (len < 1e-300) throw Error(ErrorCode::InvalidInput, "screw_motion: zero direction");
  RigidMotion m = rotation_about_axis(point, direction, angle);
  m.translation += (advance / len) * direction;
  return m;
}

Vec3 torus_point(const TorusSpec& t, const TorusCoords& c) {
  const Circle3& core = t.core;
  Vec3 w = std::cos(c.alpha) * core.u_axis + std::sin(c.alpha) * core.v_axis;
  Vec3 n = cross(core.v_axis, core.u_axis);
  return core.center + (core.radius + t.tube_radius * std::cos(c.beta)) * w +
         (t.tube_radius * std::sin(c.beta)) * n;
}

Vec3 tube_point(const TorusSpec& t, double alpha, double beta, double radial) {
  const Circle3& core = t.core;
  Vec3 w = std::cos(alpha) * core.u_axis + std::sin(alpha) * core.v_axis;
  Vec3 n = cross(core.v_axis, core.u_axis);
  return core.center + (core.radius + radial * std::cos(beta)) * w +
         (radial * std::sin(beta)) * n;
}

TubeCoords tube_coords_of(const TorusSpec& t, const Vec3& p) {
  const Circle3& core = t.core;
  Vec3 q = p - core.center;
  double x = dot(q, core.u_axis);
  double y = dot(q, core.v_axis);
  double z = dot(q, cross(core.v_axis, core.u_axis));
  double w = std::hypot(x, y);
  TubeCoords c;
  c.alpha = std::atan2(y, x);
  c.beta = std::atan2(z, w - core.radius);
  c.radial = std::hypot(z, w - core.radius);
  if (c.alpha <= -M_PI) c.alpha = M_PI;
  if (c.beta <= -M_PI) c.beta = M_PI;
  return c;
}

TorusCoords torus_coords_of(const TorusSpec& t, const Vec3& p) {
  TubeCoords c = tube_coords_of(t, p);
  if (std::abs(c.radial - t.tube_radius) > 1e-9 * t.core.radius)
    throw Error(ErrorCode::OffSurface, "torus_coords_of: point off surface");
  return {c.alpha, c.beta};
}

Vec3 pq_curve(const TorusSpec& t, int p, int q, double s) {
  if (p == 0 && q == 0) throw Error(ErrorCode::InvalidInput, "pq_curve: (0,0) is not a curve");
  TorusCoords c;
  c.alpha = wrap_angle(2 * M_PI * q * s);
  c.beta = wrap_angle(2 * M_PI * p * s);
  return torus_point(t, c);
}

}  // namespace tg
