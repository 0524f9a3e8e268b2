#pragma once

#include <array>
#include <vector>

#include "triplegear/geom.hpp"
#include "triplegear/linking.hpp"

namespace tg {

// Symmetric three-circle configuration parameters.
// Invariants: r > 0; phi, theta in (-pi, pi].
struct SymmetricParams {
  double r = 0.5;
  double phi = 0;
  double theta = -0.8;
};

// Optimization output. Invariants: thickness = objective/2 exactly as stored;
// the 120 degree rotation about z maps circle i to circle i+1 within 1e-10;
// the contact set is closed under (alpha, beta) -> (-alpha, -beta) within 1e-6.
struct DesignConfig {
  SymmetricParams params;
  double thickness = 0;
  double objective = 0;
  std::array<Circle3, 3> circles;
  std::vector<TorusCoords> contacts;  // on circle 1's torus, sorted by alpha
  LinkReport link;
};

// Circle 1: center (r,0,0), radius 1, U = (cos phi, sin phi, 0),
// V = (-sin phi sin theta, cos phi sin theta, cos theta); circles 2 and 3 are
// its rotates by +-120 degrees about z.
std::array<Circle3, 3> symmetric_config(const SymmetricParams& p);

// Min pairwise core distance (pair 1-2 by symmetry); -infinity when the
// linking constraint fails.
double objective(const SymmetricParams& p);

// Derivative-free pattern search with shrinking steps, restarted from at
// least 8 perturbed seeds; parameters resolved to tol. Throws Infeasible when
// no seed yields a linked configuration.
DesignConfig maximize_thickness(const SymmetricParams& init, bool fix_phi_zero, double tol);

// Contact charts: for each neighbor, the two global minimizers of the
// core-core distance; each contact is the midpoint of the minimizing segment
// in circle 1's torus chart at tube radius = thickness. Four coords sorted by
// alpha. Throws ContactCount unless each pair has multiplicity exactly 2.
std::vector<TorusCoords> contact_points(const DesignConfig& cfg);

}  // namespace tg
