#pragma once

#include <vector>

#include "triplegear/geom.hpp"

namespace tg {

// Gauss linking integral on a uniform 512x512 grid, rounded to the nearest
// integer. residual (if given) receives |value - rounded|.
// Throws NearSingular when the circles are within 1e-6 of touching.
int linking_number(const Circle3& a, const Circle3& b, double* residual = nullptr);

// Exact parity test for round circles: a and b are linked iff exactly one of
// the two intersections of a with b's plane lies strictly inside b's disk.
// O(1); used inside optimizer objectives where quadrature would be too slow.
bool circles_linked(const Circle3& a, const Circle3& b);

struct LinkReport {
  std::vector<std::vector<int>> pairwise;  // symmetric, diagonal unused (0)
  std::vector<std::vector<double>> residual;
  bool all_linked = false;
};

// Pairwise linking numbers; all_linked iff every off-diagonal entry nonzero.
LinkReport link_report(const std::vector<Circle3>& circles);

}  // namespace tg
