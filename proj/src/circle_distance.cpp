#include "triplegear/circle_distance.hpp"

#include <algorithm>
#include <cmath>

#include "triplegear/error.hpp"

namespace tg {

std::pair<double, Vec3> point_circle_distance(const Vec3& p, const Circle3& c, bool* degenerate) {
  Vec3 q = p - c.center;
  double qu = dot(q, c.u_axis);
  double qv = dot(q, c.v_axis);
  double h = dot(q, c.normal());
  double w = std::hypot(qu, qv);
  if (degenerate) *degenerate = false;
  if (w < 1e-14 * std::max(1.0, c.radius)) {
    if (degenerate) *degenerate = true;
    return {std::hypot(c.radius, h), c.center + c.radius * c.u_axis};
  }
  Vec3 on_circle = c.center + (c.radius / w) * (qu * c.u_axis + qv * c.v_axis);
  return {std::hypot(w - c.radius, h), on_circle};
}

namespace {

constexpr int kSeeds = 720;
constexpr double kGolden = 0.6180339887498949;

double eval(const Circle3& a, const Circle3& b, double s) {
  return point_circle_distance(a.point(s), b).first;
}

// Golden-section minimization on [lo, hi]; bracket shrunk to ~1e-13.
double golden_min(const Circle3& a, const Circle3& b, double lo, double hi) {
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = eval(a, b, x1), f2 = eval(a, b, x2);
  while (hi - lo > 1e-13) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = eval(a, b, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = eval(a, b, x2);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DistanceResult circle_circle_distance(const Circle3& a, const Circle3& b, double tol) {
  if (tol <= 0) throw Error(ErrorCode::InvalidInput, "circle_circle_distance: tol must be > 0");

  std::array<double, kSeeds> seed_val;
  for (int i = 0; i < kSeeds; ++i) seed_val[i] = eval(a, b, 2 * M_PI * i / kSeeds);

  // Refine every discrete local minimum of the seed scan.
  struct Candidate {
    double s, value;
  };
  std::vector<Candidate> cands;
  for (int i = 0; i < kSeeds; ++i) {
    double prev = seed_val[(i + kSeeds - 1) % kSeeds];
    double next = seed_val[(i + 1) % kSeeds];
    if (seed_val[i] <= prev && seed_val[i] <= next) {
      double center = 2 * M_PI * i / kSeeds;
      double span = 2 * M_PI / kSeeds;
      double s = golden_min(a, b, center - span, center + span);
      cands.push_back({wrap_angle(s), eval(a, b, s)});
    }
  }

  double best = cands[0].value;
  for (const auto& c : cands) best = std::min(best, c.value);

  DistanceResult res;
  res.distance = best;
  double tie = 10 * tol;

  // Distinct global minimizers among candidates (dedupe by angle on a).
  std::vector<Candidate> ties;
  for (const auto& c : cands)
    if (c.value <= best + tie) ties.push_back(c);
  std::sort(ties.begin(), ties.end(), [](const Candidate& x, const Candidate& y) { return x.s < y.s; });
  std::vector<Candidate> distinct;
  for (const auto& c : ties) {
    bool dup = false;
    for (const auto& d : distinct)
      if (std::abs(wrap_angle(c.s - d.s)) < 1e-6) dup = true;
    if (!dup) distinct.push_back(c);
  }
  res.multiplicity = static_cast<int>(distinct.size());

  // Continuum degeneracy: most seeds already sit at the optimum.
  int seeds_at_opt = 0;
  for (double v : seed_val)
    if (v <= best + tie) ++seeds_at_opt;
  res.degenerate_continuum = seeds_at_opt > kSeeds / 4;

  double s_best = distinct[0].s;
  for (const auto& d : distinct) {
    res.minimizers.emplace_back(d.s, 0.0);
    if (d.value < eval(a, b, s_best)) s_best = d.s;
  }
  res.angle_a = s_best;
  res.p_on_a = a.point(s_best);
  auto inner = point_circle_distance(res.p_on_a, b);
  res.p_on_b = inner.second;
  Vec3 q = res.p_on_b - b.center;
  res.angle_b = std::atan2(dot(q, b.v_axis), dot(q, b.u_axis));
  for (auto& m : res.minimizers) {
    Vec3 pb = point_circle_distance(a.point(m.first), b).second - b.center;
    m.second = std::atan2(dot(pb, b.v_axis), dot(pb, b.u_axis));
  }
  return res;
}

}  // namespace tg
