#include "triplegear/linking.hpp"

#include <cmath>
#include <vector>

#include "triplegear/circle_distance.hpp"
#include "triplegear/error.hpp"
#include "triplegear/parallel.hpp"

namespace tg {

namespace {

constexpr int kNodes = 512;

// Sums values with pairwise (cascade) summation so parallel row evaluation
// stays bit-reproducible regardless of thread count.
double pairwise_sum(std::vector<double>& v) {
  std::size_t n = v.size();
  while (n > 1) {
    std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < n / 2; ++i) v[i] = v[2 * i] + v[2 * i + 1];
    if (n % 2) v[n / 2] = v[n - 1];
    n = half;
  }
  return v.empty() ? 0.0 : v[0];
}

}  // namespace

int linking_number(const Circle3& a, const Circle3& b, double* residual) {
  if (circle_circle_distance(a, b, 1e-9).distance < 1e-6)
    throw Error(ErrorCode::NearSingular, "linking_number: circles nearly touching");

  double h = 2 * M_PI / kNodes;
  std::vector<Vec3> pa(kNodes), ta(kNodes), pb(kNodes), tb(kNodes);
  for (int i = 0; i < kNodes; ++i) {
    double s = h * (i + 0.5);
    pa[i] = a.point(s);
    ta[i] = a.radius * (-std::sin(s) * a.u_axis + std::cos(s) * a.v_axis);
    pb[i] = b.point(s);
    tb[i] = b.radius * (-std::sin(s) * b.u_axis + std::cos(s) * b.v_axis);
  }

  std::vector<double> row(kNodes);
  parallel_for(0, kNodes, [&](std::size_t i) {
    std::vector<double> terms(kNodes);
    for (int j = 0; j < kNodes; ++j) {
      Vec3 d = pa[i] - pb[j];
      double r = norm(d);
      terms[j] = dot(d, cross(ta[i], tb[j])) / (r * r * r);
    }
    row[i] = pairwise_sum(terms);
  });
  double integral = pairwise_sum(row) * h * h / (4 * M_PI);
  long rounded = std::lround(integral);
  if (residual) *residual = std::abs(integral - rounded);
  return static_cast<int>(rounded);
}

bool circles_linked(const Circle3& a, const Circle3& b) {
  // Intersections of circle a with the plane of b: a.point(t) satisfies
  // n.(p - cb) = 0, a cos(t) + b sin(t) + c = 0 form.
  Vec3 n = b.normal();
  double ca = a.radius * dot(n, a.u_axis);
  double cb = a.radius * dot(n, a.v_axis);
  double cc = dot(n, a.center - b.center);
  double amp = std::hypot(ca, cb);
  if (amp < 1e-300 || amp < std::abs(cc)) return false;  // circle a misses b's plane
  // ca cos t + cb sin t = amp cos(t - phase); roots t = phase +- delta
  double phase = std::atan2(cb, ca);
  double delta = std::acos(std::min(1.0, std::max(-1.0, -cc / amp)));
  int inside_count = 0;
  for (double t : {phase + delta, phase - delta}) {
    Vec3 p = a.point(t);
    Vec3 q = p - b.center;
    double w = std::hypot(dot(q, b.u_axis), dot(q, b.v_axis));
    if (w < b.radius) ++inside_count;
  }
  return inside_count == 1;
}

LinkReport link_report(const std::vector<Circle3>& circles) {
  std::size_t n = circles.size();
  LinkReport rep;
  rep.pairwise.assign(n, std::vector<int>(n, 0));
  rep.residual.assign(n, std::vector<double>(n, 0.0));
  rep.all_linked = n > 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double res = 0;
      int lk = linking_number(circles[i], circles[j], &res);
      rep.pairwise[i][j] = rep.pairwise[j][i] = lk;
      rep.residual[i][j] = rep.residual[j][i] = res;
      if (lk == 0) rep.all_linked = false;
    }
  return rep;
}

}  // namespace tg
