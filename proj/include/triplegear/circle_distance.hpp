#pragma once

#include <utility>
#include <vector>

#include "triplegear/geom.hpp"

namespace tg {

// Closest pair between two circles.
// Invariants: |p_on_a - p_on_b| = distance within 1e-10; p_on_a on circle a
// within 1e-12. multiplicity counts distinct global minimizers (ties within
// 10*tol of the optimum); degenerate_continuum flags a continuum of minimizers
// (e.g. coaxial circles), detected when more than 25% of seeds reach the optimum.
struct DistanceResult {
  double distance = 0;
  Vec3 p_on_a, p_on_b;
  double angle_a = 0, angle_b = 0;
  int multiplicity = 1;
  bool degenerate_continuum = false;
  std::vector<std::pair<double, double>> minimizers;  // (angle_a, angle_b) per tie
};

// Exact closed form. Degenerate when p lies on the circle's axis: returns the
// distance to any circle point and sets *degenerate if given.
std::pair<double, Vec3> point_circle_distance(const Vec3& p, const Circle3& c,
                                              bool* degenerate = nullptr);

// Global minimum of |a(s) - b(t)| within tol: 720-seed outer scan over a's
// angle with the closed-form inner solve, then golden-section refinement.
DistanceResult circle_circle_distance(const Circle3& a, const Circle3& b, double tol = 1e-10);

}  // namespace tg
