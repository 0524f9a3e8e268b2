#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "triplegear/error.hpp"
#include "triplegear/geom.hpp"
#include "triplegear/kinematics.hpp"
#include "triplegear/mesh.hpp"
#include "triplegear/optimizer.hpp"

using namespace tg;

namespace {

constexpr double kPi = std::numbers::pi;

DesignConfig published_config() {
  DesignConfig cfg;
  cfg.params = {0.4950197, 0.0, -0.8560281};
  cfg.circles = symmetric_config(cfg.params);
  cfg.thickness = 0.3228837;
  return cfg;
}

TriMesh sphere_mesh(const Vec3& center, double radius) {
  ParamSurface s;
  s.f = [=](double u, double v) {
    return center + radius * Vec3{std::cos(u) * std::sin(v), std::sin(u) * std::sin(v),
                                  std::cos(v)};
  };
  s.u1 = 2 * kPi;
  s.v1 = kPi;
  s.wrap_u = true;
  s.collapse_v0 = true;
  s.collapse_v1 = true;
  return triangulate(s, 0.25 * radius);
}

}  // namespace

TEST_CASE("ring movement starts at identity, inverts, and closes after a turn") {
  DesignConfig cfg = published_config();
  for (int ring = 0; ring < 3; ++ring) {
    CHECK(operator_distance(ring_movement(cfg, ring, 1.0, 0.0), RigidMotion::identity()) < 1e-12);
    RigidMotion m = ring_movement(cfg, ring, 1.3, 0.7);
    CHECK(operator_distance(compose(m, m.inverse()), RigidMotion::identity()) < 1e-12);
    CHECK(operator_distance(compose(m.inverse(), m), RigidMotion::identity()) < 1e-12);
    CHECK(operator_distance(ring_movement(cfg, ring, 1.0, 2 * kPi), RigidMotion::identity()) <
          1e-10);
  }
  CHECK_THROWS_AS(ring_movement(cfg, 3, 1.0, 0.0), Error);
}

TEST_CASE("ring movement preserves its own core circle") {
  DesignConfig cfg = published_config();
  auto rng = std::mt19937_64(7);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int ring = 0; ring < 3; ++ring) {
    const Circle3& c = cfg.circles[size_t(ring)];
    for (int k = 0; k < 16; ++k) {
      Vec3 p = c.point(ang(rng));
      Vec3 q = ring_movement(cfg, ring, 1.0, ang(rng))(p);
      // q stays on the same circle: same distance from center, in plane.
      CHECK(std::abs(dist(q, c.center) - c.radius) < 1e-12);
      CHECK(std::abs(dot(q - c.center, c.normal())) < 1e-12);
    }
  }
}

TEST_CASE("the 120 degree turn permutes the ring movements") {
  DesignConfig cfg = published_config();
  RigidMotion third = rotation_about_axis({0, 0, 0}, {0, 0, 1}, 2 * kPi / 3);
  for (int ring = 0; ring < 3; ++ring) {
    RigidMotion lhs = ring_movement(cfg, (ring + 1) % 3, 0.9, 1.1);
    RigidMotion rhs = compose(third, compose(ring_movement(cfg, ring, 0.9, 1.1), third.inverse()));
    CHECK(operator_distance(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("relative motion composes the two ring movements") {
  DesignConfig cfg = published_config();
  RigidMotion rel = relative_motion(cfg, 0, 1, 1.2, 0.8);
  RigidMotion expect = compose(ring_movement(cfg, 0, 1.2, 0.8).inverse(),
                               ring_movement(cfg, 1, 1.2, 0.8));
  CHECK(operator_distance(rel, expect) < 1e-14);
  CHECK(operator_distance(relative_motion(cfg, 0, 1, 1.2, 0.0), RigidMotion::identity()) < 1e-12);
}

TEST_CASE("a single ring's rotation obeys the one-parameter group law") {
  DesignConfig cfg = published_config();
  for (int ring = 0; ring < 3; ++ring) {
    auto trace = sample_trace([&](double t) { return ring_movement(cfg, ring, 1.0, t); },
                              2 * kPi, 128);
    CHECK(group_law_residual(trace) < 1e-10);
    CHECK(is_simple(trace, 1e-10));
  }
}

TEST_CASE("the inter-ring relative motion breaks the group law") {
  DesignConfig cfg = published_config();
  auto trace = sample_trace([&](double t) { return relative_motion(cfg, 0, 1, 1.0, t); },
                            2 * kPi, 128);
  CHECK(group_law_residual(trace) > 1e-3);
  CHECK_FALSE(is_simple(trace, 1e-3));
}

TEST_CASE("trace rejects malformed sampling grids") {
  DesignConfig cfg = published_config();
  auto fn = [&](double t) { return ring_movement(cfg, 0, 1.0, t); };
  auto trace = sample_trace(fn, 1.0, 64);
  trace.times[30] += 1e-3;
  CHECK_THROWS_AS(group_law_residual(trace), Error);
  auto shifted = sample_trace(fn, 1.0, 64);
  for (double& t : shifted.times) t += 0.5;
  CHECK_THROWS_AS(group_law_residual(shifted), Error);
  CHECK_THROWS_AS(sample_trace(fn, -1.0, 64), Error);
  auto small = sample_trace(fn, 1.0, 32);
  CHECK_THROWS_AS(is_simple(small, 1e-6), Error);
}

TEST_CASE("a traced point starts at itself and stays rigid") {
  DesignConfig cfg = published_config();
  std::vector<double> times;
  for (int i = 0; i < 50; ++i) times.push_back(2 * kPi * i / 49);
  Vec3 p = cfg.circles[0].point(0.3) + Vec3{0.01, 0.02, -0.01};
  Vec3 q = cfg.circles[0].point(1.1);
  auto path_p = trace_point(p, cfg, 0, 1, 1.0, times);
  auto path_q = trace_point(q, cfg, 0, 1, 1.0, times);
  REQUIRE(path_p.size() == times.size());
  CHECK(dist(path_p[0], p) < 1e-12);
  for (size_t i = 0; i < times.size(); ++i)
    CHECK(std::abs(dist(path_p[i], path_q[i]) - dist(p, q)) < 1e-10);
  // Watching from the point's own ring the path never moves.
  auto fixed = trace_point(p, cfg, 0, 0, 1.0, times);
  for (const Vec3& v : fixed) CHECK(dist(v, p) < 1e-12);
}

TEST_CASE("clearance sweep matches the analytic gap of orbiting spheres") {
  TriMesh a = sphere_mesh({0, 0, 0}, 0.5);
  TriMesh b = sphere_mesh({0, 0, 0}, 0.3);
  // b's center orbits at radius 2 while a stays put: gap = 2 - 0.5 - 0.3.
  MotionFn still = [](double) { return RigidMotion::identity(); };
  MotionFn orbit = [](double t) {
    RigidMotion m = rotation_about_axis({0, 0, 0}, {0, 0, 1}, t);
    m.translation += m.rotation * Vec3{2, 0, 0};
    return m;
  };
  ClearanceSweep sweep = min_clearance_sweep(a, still, b, orbit, 2 * kPi, 48);
  CHECK(sweep.clearance == doctest::Approx(1.2).epsilon(0.01));
  CHECK(int(sweep.per_step.size()) == 48);
  for (double v : sweep.per_step) CHECK(v == doctest::Approx(1.2).epsilon(0.01));
}

TEST_CASE("overlapping spheres report negative clearance") {
  TriMesh a = sphere_mesh({0, 0, 0}, 0.5);
  TriMesh b = sphere_mesh({0.6, 0, 0}, 0.5);
  MotionFn still = [](double) { return RigidMotion::identity(); };
  ClearanceSweep sweep = min_clearance_sweep(a, still, b, still, 1.0, 4);
  // Deepest vertex of b sits 0.4 inside a.
  CHECK(sweep.clearance < -0.3);
  CHECK(sweep.clearance > -0.5);
}

TEST_CASE("clearance csv lists one row per step per pair") {
  ClearanceSweep s;
  s.clearance = 0.125;
  s.per_step = {0.5, 0.25, 0.125, 0.25};
  s.step = 2;
  s.time = 1.0;
  std::string path = "clearance_test.csv";
  write_clearance_csv(path, {{"ab", s}, {"cd", s}}, 2.0);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line == "step,time,pair,clearance");
  int rows = 0;
  int ab_rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find("ab") != std::string::npos) ++ab_rows;
  }
  CHECK(rows == 8);
  CHECK(ab_rows == 4);
  std::remove(path.c_str());
}
