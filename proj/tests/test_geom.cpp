#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "triplegear/error.hpp"
#include "triplegear/geom.hpp"

using namespace tg;

namespace {
constexpr double kPi = std::numbers::pi;

std::mt19937_64 rng_for(const char* tag) {
  std::seed_seq seq(tag, tag + std::char_traits<char>::length(tag));
  return std::mt19937_64(seq);
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Vec3 v{n(rng), n(rng), n(rng)};
  return normalized(v);
}
}  // namespace

TEST_CASE("wrap_angle lands in (-pi, pi] and preserves the angle mod 2pi") {
  auto rng = rng_for("wrap");
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng);
    const double w = wrap_angle(a);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    CHECK(std::abs(std::remainder(w - a, 2 * kPi)) < 1e-12);
  }
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3 * kPi) == doctest::Approx(kPi));
}

TEST_CASE("rotation_about_axis matches the analytic z-rotation") {
  const double th = 0.73;
  const RigidMotion m = rotation_about_axis({0, 0, 0}, {0, 0, 1}, th);
  CHECK(m.rotation.m[0] == doctest::Approx(std::cos(th)));
  CHECK(m.rotation.m[1] == doctest::Approx(-std::sin(th)));
  CHECK(m.rotation.m[3] == doctest::Approx(std::sin(th)));
  CHECK(m.rotation.m[4] == doctest::Approx(std::cos(th)));
  CHECK(m.rotation.m[8] == doctest::Approx(1.0));
}

TEST_CASE("rotations are orthonormal and compose like angles") {
  auto rng = rng_for("rot");
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const Vec3 axis = random_unit(rng);
    const Vec3 center{u(rng), u(rng), u(rng)};
    const double a = u(rng), b = u(rng);
    const RigidMotion ma = rotation_about_axis(center, axis, a);
    const RigidMotion mb = rotation_about_axis(center, axis, b);
    const RigidMotion mab = rotation_about_axis(center, axis, a + b);
    CHECK(orthonormality_drift(ma.rotation) < 1e-12);
    const RigidMotion c = compose(ma, mb);
    CHECK(frobenius_dist(c.rotation, mab.rotation) < 1e-10);
    CHECK(dist(c.translation, mab.translation) < 1e-10);
    // Axis points and the center stay fixed.
    CHECK(dist(ma(center), center) < 1e-12);
    CHECK(dist(ma(center + axis), center + axis) < 1e-12);
  }
}

TEST_CASE("motion inverse undoes the motion") {
  auto rng = rng_for("inv");
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 200; ++i) {
    const RigidMotion m = rotation_about_axis({u(rng), u(rng), u(rng)}, random_unit(rng), u(rng));
    const Vec3 p{u(rng), u(rng), u(rng)};
    CHECK(dist(m.inverse()(m(p)), p) < 1e-12);
  }
}

TEST_CASE("screw_motion advances along its axis while rotating about it") {
  const Vec3 axis{0, 0, 1};
  const double angle = 0.5, advance = 0.7 * angle / (2 * kPi);
  const RigidMotion m = screw_motion({0, 0, 0}, axis, angle, advance);
  const Vec3 q = m({1, 0, 0});
  CHECK(q.x == doctest::Approx(std::cos(angle)));
  CHECK(q.y == doctest::Approx(std::sin(angle)));
  CHECK(q.z == doctest::Approx(advance));
  // Screws about the same axis compose by adding angles and advances.
  const RigidMotion twice = compose(m, m);
  const RigidMotion direct = screw_motion({0, 0, 0}, axis, 2 * angle, 2 * advance);
  CHECK(frobenius_dist(twice.rotation, direct.rotation) < 1e-12);
  CHECK(dist(twice.translation, direct.translation) < 1e-12);
}

TEST_CASE("torus chart round-trips on and off the surface") {
  Circle3 core;
  core.center = {0.3, -0.2, 0.5};
  core.u_axis = {1, 0, 0};
  core.v_axis = {0, std::cos(0.4), std::sin(0.4)};
  core.radius = 1.0;
  const TorusSpec torus{core, 0.32};

  auto rng = rng_for("torus");
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_real_distribution<double> rad(0.05, 0.5);
  for (int i = 0; i < 500; ++i) {
    const double alpha = ang(rng), beta = ang(rng), r = rad(rng);
    const Vec3 p = tube_point(torus, alpha, beta, r);
    const TubeCoords tc = tube_coords_of(torus, p);
    CHECK(std::abs(wrap_angle(tc.alpha - alpha)) < 1e-10);
    CHECK(std::abs(wrap_angle(tc.beta - beta)) < 1e-10);
    CHECK(tc.radial == doctest::Approx(r).epsilon(1e-10));
  }
  const Vec3 on = torus_point(torus, {0.3, 0.4});
  const TorusCoords sc = torus_coords_of(torus, on);
  CHECK(std::abs(wrap_angle(sc.alpha - 0.3)) < 1e-10);
  CHECK(std::abs(wrap_angle(sc.beta - 0.4)) < 1e-10);
  CHECK(dist(on, tube_point(torus, 0.3, 0.4, torus.tube_radius)) < 1e-12);
  const Vec3 off = tube_point(torus, 0.3, 0.4, torus.tube_radius * 2);
  CHECK_THROWS_AS(torus_coords_of(torus, off), Error);
}

TEST_CASE("pq curve closes and lies on the tube surface") {
  Circle3 core;
  core.center = {0, 0, 0};
  core.u_axis = {1, 0, 0};
  core.v_axis = {0, 1, 0};
  core.radius = 1.0;
  const TorusSpec torus{core, 0.25};
  CHECK(dist(pq_curve(torus, 1, 1, 0.0), pq_curve(torus, 1, 1, 1.0)) < 1e-12);
  for (int i = 0; i < 64; ++i) {
    const Vec3 p = pq_curve(torus, 1, 1, i / 64.0);
    const TubeCoords tc = tube_coords_of(torus, p);
    CHECK(tc.radial == doctest::Approx(torus.tube_radius).epsilon(1e-9));
  }
  CHECK_THROWS_AS(pq_curve(torus, 0, 0, 0.5), Error);
}

TEST_CASE("orthonormalized repairs small drift") {
  auto rng = rng_for("polar");
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 100; ++i) {
    Mat3 r = rotation_about_axis({0, 0, 0}, random_unit(rng), u(rng) * 3).rotation;
    Mat3 dirty = r;
    for (double& c : dirty.m) c += 1e-8 * u(rng);
    const Mat3 clean = orthonormalized(dirty);
    CHECK(orthonormality_drift(clean) < 1e-14);
    CHECK(frobenius_dist(clean, r) < 1e-6);
  }
}
