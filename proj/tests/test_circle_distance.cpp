#include <doctest.h>

#include <cmath>
#include <random>

#include "triplegear/circle_distance.hpp"
#include "triplegear/error.hpp"
#include "triplegear/geom.hpp"

using namespace tg;

namespace {

std::mt19937_64 rng_for(const char* tag) {
  std::seed_seq seq(tag, tag + std::char_traits<char>::length(tag));
  return std::mt19937_64(seq);
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return normalized(Vec3{n(rng), n(rng), n(rng)});
}

Circle3 random_circle(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-2, 2), rad(0.5, 2);
  Circle3 c;
  c.center = {pos(rng), pos(rng), pos(rng)};
  Vec3 n = random_unit(rng);
  Vec3 u = normalized(cross(n, std::abs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0}));
  c.u_axis = u;
  c.v_axis = normalized(cross(n, u));
  c.radius = rad(rng);
  return c;
}

// Dense grid scan plus golden-section polish on both angles.
double grid_oracle(const Circle3& a, const Circle3& b, int n) {
  double best = 1e300;
  double sa = 0, sb = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double ta = 2 * M_PI * i / n, tb = 2 * M_PI * j / n;
      double d = dist(a.point(ta), b.point(tb));
      if (d < best) {
        best = d;
        sa = ta;
        sb = tb;
      }
    }
  const double gr = 0.5 * (std::sqrt(5.0) - 1);
  double w = 2 * M_PI / n;
  for (int round = 0; round < 80; ++round) {
    for (int axis = 0; axis < 2; ++axis) {
      double& s = axis == 0 ? sa : sb;
      double lo = s - w, hi = s + w;
      auto f = [&](double t) {
        return axis == 0 ? dist(a.point(t), b.point(sb)) : dist(a.point(sa), b.point(t));
      };
      double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
      double f1 = f(x1), f2 = f(x2);
      for (int it = 0; it < 40; ++it) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - gr * (hi - lo);
          f1 = f(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + gr * (hi - lo);
          f2 = f(x2);
        }
      }
      s = 0.5 * (lo + hi);
    }
    w *= 0.5;
    best = dist(a.point(sa), b.point(sb));
  }
  return best;
}

}  // namespace

TEST_CASE("point-circle distance matches brute force") {
  auto rng = rng_for("pt-circle");
  std::uniform_real_distribution<double> pos(-3, 3);
  for (int t = 0; t < 200; ++t) {
    Circle3 c = random_circle(rng);
    Vec3 p{pos(rng), pos(rng), pos(rng)};
    auto [d, q] = point_circle_distance(p, c);
    double brute = 1e300;
    for (int i = 0; i < 20000; ++i)
      brute = std::min(brute, dist(p, c.point(2 * M_PI * i / 20000)));
    CHECK(d == doctest::Approx(brute).epsilon(1e-9));
    CHECK(dist(p, q) == doctest::Approx(d).epsilon(1e-12));
  }
}

TEST_CASE("point on the axis is a degenerate continuum") {
  Circle3 c;
  c.center = {1, 2, 3};
  bool degenerate = false;
  auto [d, q] = point_circle_distance({1, 2, 7}, c, &degenerate);
  CHECK(degenerate);
  CHECK(d == doctest::Approx(std::sqrt(1 + 16.0)));
  (void)q;
}

TEST_CASE("circle-circle distance agrees with the grid oracle") {
  auto rng = rng_for("circle-grid");
  for (int t = 0; t < 25; ++t) {
    Circle3 a = random_circle(rng), b = random_circle(rng);
    DistanceResult r = circle_circle_distance(a, b);
    CHECK(r.distance == doctest::Approx(grid_oracle(a, b, 400)).epsilon(1e-8));
    CHECK(dist(r.p_on_a, r.p_on_b) == doctest::Approx(r.distance).epsilon(1e-10));
    CHECK(dist(r.p_on_a, a.point(r.angle_a)) < 1e-9);
    CHECK(dist(r.p_on_b, b.point(r.angle_b)) < 1e-9);
  }
}

TEST_CASE("concentric coplanar circles report a continuum") {
  Circle3 a, b;
  a.radius = 1;
  b.radius = 2;
  DistanceResult r = circle_circle_distance(a, b);
  CHECK(r.distance == doctest::Approx(1.0));
  CHECK(r.degenerate_continuum);
}

TEST_CASE("intersecting circles give two zero-distance minimizers") {
  Circle3 a, b;
  b.center = {1, 0, 0};
  DistanceResult r = circle_circle_distance(a, b);
  CHECK(r.distance < 1e-9);
  CHECK(r.multiplicity == 2);
  REQUIRE(r.minimizers.size() == 2);
  CHECK(std::abs(std::abs(r.minimizers[0].first) - M_PI / 3) < 1e-6);
  CHECK_FALSE(r.degenerate_continuum);
}

TEST_CASE("rejects a non-positive tolerance") {
  Circle3 a, b;
  b.center = {3, 0, 0};
  CHECK_THROWS_AS(circle_circle_distance(a, b, 0.0), Error);
}
