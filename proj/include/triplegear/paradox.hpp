#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "triplegear/geom.hpp"
#include "triplegear/mesh.hpp"

namespace tg {

// One flank sample of an involute tooth. The surface normal at the sample is
// tangent to the base circle: |p x n| equals the base radius exactly, which
// pins the profile against an independent check.
struct FlankSample {
  std::array<double, 2> point;
  double phi0;  // involute start angle on the base circle
  double u;     // involute parameter; radius is rb*sqrt(1+u^2)
  int sign;     // +1 on the leading flank, -1 on the trailing flank
};

// Closed involute gear section: teeth from the base circle to the tip circle,
// root arcs on the base circle between them.
struct InvoluteProfile {
  double base_radius = 0;
  double tip_radius = 0;
  int tooth_count = 0;
  std::vector<std::array<double, 2>> polygon;  // counterclockwise, closed
  std::vector<FlankSample> flank_samples;
};

InvoluteProfile involute_profile(double base_radius, int tooth_count, double tip_radius,
                                 int flank_samples = 48);

// Three identical screws on parallel vertical axes at the vertices of an
// equilateral triangle, equal pitch and phase. The section must be invariant
// under the 1/tooth_count turn for the common phase to be consistent.
struct ScrewTriple {
  std::array<TriMesh, 3> screws;
  std::array<Vec3, 3> axes;
  double center_distance = 0;
  double pitch = 0;
  double height = 0;
};

// Builds the triple at the given axis spacing; zero solves for the tangent
// spacing where the flanks just touch. Every pair then stays in contact while
// all three turn the same direction at equal speed, with the contact normal
// along the center line; the twist must cover a full tooth period over the
// height (|pitch| <= tooth_count * height) or contact is lost at some phases.
ScrewTriple paradox_screws(const InvoluteProfile& profile, double pitch, double height,
                           double center_distance = 0);

// Tangent center distance of two co-rotating copies of the profile: the
// smallest spacing with nonnegative section clearance at every phase.
double tangent_center_distance(const InvoluteProfile& profile);

// One instant of a meshing pair under (phase, ratio_b*phase) rotations.
struct ContactSample {
  double phase = 0;
  double contact_angle_deg = 0;  // transverse angle between contact normal and center line
  double clearance = 0;          // negative means penetration
  Vec3 witness_a{0, 0, 0};
  Vec3 witness_b{0, 0, 0};
};

// Sweeps mesh_a about axis_a (vertical) over one period with mesh_b
// following at ratio_b, and reports the closest-approach witness at each
// sampled phase. Throws when the pair separates beyond the threshold.
std::vector<ContactSample> contact_normal_report(const TriMesh& mesh_a, const Vec3& axis_a,
                                                 const TriMesh& mesh_b, const Vec3& axis_b,
                                                 int samples, double ratio_b,
                                                 double threshold = 0.05,
                                                 double period = 2 * M_PI);

// CSV rows: phase,contact_angle_deg,clearance.
void write_contact_csv(const std::string& path, const std::vector<ContactSample>& report);

}  // namespace tg
