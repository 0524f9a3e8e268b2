#pragma once

#include <array>
#include <vector>

#include "triplegear/carve.hpp"
#include "triplegear/geom.hpp"
#include "triplegear/mesh.hpp"
#include "triplegear/optimizer.hpp"

namespace tg {

// Central drive screw. The axis is the assembly's symmetry axis (z); driving
// it by rotation delta is the same as translating it by pitch*delta/(2 pi).
struct AxleSpec {
  double pitch = 0.70;         // axial advance per turn; sign = handedness
  double outer_radius = 0.17;  // seed blank radius
  double length = 1.6;         // axial extent of the finished screw
  int starts = 3;
  std::vector<std::array<double, 2>> cross_section;  // closed, through z = 0
};

// Axle turns per gear turn: tooth count over starts, counter-rotating.
double axle_speed_ratio(int tooth_count, int starts);

// Largest axis-centered cylinder radius clear of the three plain tubes; the
// blank must fit this hole, the teeth then cut the thread into it.
double central_hole_radius(const DesignConfig& cfg);

// Cross-section of the blank after the rotating gears, each composed with the
// inverse screw motion, sweep through the axle frame. A full gear cycle sweeps
// an axisymmetric tube about that gear's own axis, while the screwing blank
// occupies a fixed region; a ray sample therefore survives exactly when its
// whole helical fiber misses all three swept tubes. Every surviving ray of
// the z = 0 polar grid becomes one boundary vertex.
std::vector<std::array<double, 2>> carve_axle_section(const DesignConfig& cfg,
                                                      const GearSolid& gear, const AxleSpec& seed,
                                                      double omega_gear, double omega_axle,
                                                      int steps);

// Sweeps the section along the screw of the given pitch; fan caps close the
// ends. Layer spacing is uniform so one-layer screw steps map mesh vertices
// onto mesh vertices exactly.
TriMesh axle_mesh(const std::vector<std::array<double, 2>>& section, const AxleSpec& spec,
                  int layers = 161);

}  // namespace tg
