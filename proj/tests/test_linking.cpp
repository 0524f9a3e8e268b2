#include <doctest.h>

#include <cmath>
#include <random>

#include "triplegear/error.hpp"
#include "triplegear/geom.hpp"
#include "triplegear/linking.hpp"
#include "triplegear/optimizer.hpp"

using namespace tg;

namespace {

std::mt19937_64 rng_for(const char* tag) {
  std::seed_seq seq(tag, tag + std::char_traits<char>::length(tag));
  return std::mt19937_64(seq);
}

Circle3 random_circle(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> pos(-1.5, 1.5), rad(0.5, 1.5);
  Circle3 c;
  c.center = {pos(rng), pos(rng), pos(rng)};
  Vec3 nv = normalized(Vec3{n(rng), n(rng), n(rng)});
  Vec3 u = normalized(cross(nv, std::abs(nv.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0}));
  c.u_axis = u;
  c.v_axis = normalized(cross(nv, u));
  c.radius = rad(rng);
  return c;
}

// Signed count of a's passages through the flat disk bounded by b. Closed
// form: a meets b's plane in at most two points; each inside the disk adds
// the sign of the crossing direction against b's normal.
int disk_crossing_number(const Circle3& a, const Circle3& b) {
  Vec3 n = b.normal();
  double ca = a.radius * dot(n, a.u_axis);
  double cb = a.radius * dot(n, a.v_axis);
  double cc = dot(n, a.center - b.center);
  double amp = std::hypot(ca, cb);
  if (amp < std::abs(cc)) return 0;
  double phase = std::atan2(cb, ca);
  double delta = std::acos(std::clamp(-cc / amp, -1.0, 1.0));
  int total = 0;
  for (double t : {phase + delta, phase - delta}) {
    Vec3 p = a.point(t);
    Vec3 q = p - b.center;
    if (std::hypot(dot(q, b.u_axis), dot(q, b.v_axis)) >= b.radius) continue;
    Vec3 tangent = a.radius * (-std::sin(t) * a.u_axis + std::cos(t) * a.v_axis);
    total += dot(tangent, n) > 0 ? 1 : -1;
  }
  return total;
}

Circle3 hopf_partner() {
  // Unit circle through the origin in the xz plane, encircling the x axis
  // point where the base circle crosses.
  Circle3 a;
  a.center = {1, 0, 0};
  a.u_axis = {1, 0, 0};
  a.v_axis = {0, 0, 1};
  return a;
}

}  // namespace

TEST_CASE("hopf pair links once and matches the disk-crossing count") {
  Circle3 b;  // unit circle in the xy plane
  Circle3 a = hopf_partner();
  double res = 1;
  int lk = linking_number(a, b, &res);
  CHECK(std::abs(lk) == 1);
  CHECK(res < 1e-3);
  CHECK(lk == disk_crossing_number(a, b));
  CHECK(circles_linked(a, b));
  CHECK(circles_linked(b, a));
}

TEST_CASE("linking number is symmetric and flips with orientation") {
  Circle3 b;
  Circle3 a = hopf_partner();
  int lk = linking_number(a, b);
  CHECK(linking_number(b, a) == lk);
  Circle3 ar = a;
  ar.v_axis = -ar.v_axis;  // reversed traversal
  CHECK(linking_number(ar, b) == -lk);
  Circle3 br = b;
  br.v_axis = -br.v_axis;
  CHECK(linking_number(a, br) == -lk);
  CHECK(linking_number(ar, br) == lk);
}

TEST_CASE("distant circles do not link") {
  Circle3 a, b;
  b.center = {5, 0, 0};
  double res = 1;
  CHECK(linking_number(a, b, &res) == 0);
  CHECK(res < 1e-6);
  CHECK_FALSE(circles_linked(a, b));
}

TEST_CASE("random pairs agree with the disk-crossing oracle") {
  auto rng = rng_for("linking-random");
  int linked_seen = 0, unlinked_seen = 0;
  for (int t = 0; t < 60; ++t) {
    Circle3 a = random_circle(rng), b = random_circle(rng);
    int oracle = disk_crossing_number(a, b);
    double res = 1;
    int lk;
    try {
      lk = linking_number(a, b, &res);
    } catch (const Error&) {
      continue;  // nearly touching draw
    }
    CHECK(lk == oracle);
    CHECK(res < 0.01);
    CHECK(circles_linked(a, b) == (oracle != 0));
    (oracle != 0 ? linked_seen : unlinked_seen)++;
  }
  CHECK(linked_seen > 3);
  CHECK(unlinked_seen > 3);
}

TEST_CASE("nearly touching circles are rejected") {
  Circle3 a, b;
  b.center = {2.0 + 1e-8, 0, 0};
  CHECK_THROWS_AS(linking_number(a, b), Error);
  try {
    linking_number(a, b);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NearSingular);
  }
}

TEST_CASE("three-ring report is fully linked; separated rings are not") {
  auto circles = symmetric_config({0.4950197, 0.0, -0.8560281});
  LinkReport rep = link_report({circles[0], circles[1], circles[2]});
  CHECK(rep.all_linked);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      CHECK(std::abs(rep.pairwise[i][j]) == 1);
      CHECK(rep.pairwise[i][j] == rep.pairwise[j][i]);
      CHECK(rep.residual[i][j] < 0.01);
    }

  std::vector<Circle3> split(3);
  split[0].center = {0, 0, 0};
  split[1].center = {10, 0, 0};
  split[2].center = {20, 0, 0};
  LinkReport none = link_report(split);
  CHECK_FALSE(none.all_linked);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(none.pairwise[i][j] == 0);
}
