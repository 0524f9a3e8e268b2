#pragma once

#include <array>
#include <string>
#include <vector>

#include "triplegear/geom.hpp"
#include "triplegear/mesh.hpp"
#include "triplegear/optimizer.hpp"
#include "triplegear/profile.hpp"

namespace tg {

// Free parameters of the tooth system. Geometry-derived quantities (tube
// radius, gearing longitudes, outer-row phases and shear rates) come from the
// design config and from the detection sweep.
struct GearDesign {
  int tooth_count = 12;
  double addendum_fraction = 0.25;  // of the tube radius
  double dedendum_fraction = 0.25;
  double fill = 0.5;
  double top_land_fraction = 0.2;
  double clearance_gap = 0.02;
  double inner_band_halfwidth = 0.25;
  double outer_band_halfwidth = 0.45;
  double inner_flank_slope = -0.12;
  double hollow_fraction = 0.15;  // shell thickness over tube radius
  int field_alpha = 576;          // height-field and mesh grid
  int field_beta = 288;
  int tool_alpha = 1024;          // tool skin sampling density
  int sweep_steps = 1152;         // envelope time resolution
  int detect_steps = 384;         // row-detection time resolution
};

// Radial height over the (alpha, beta) chart of one ring's torus. Node (i, j)
// sits at alpha = -pi + i*2pi/na, beta = -pi + j*2pi/nb; indices wrap.
struct HeightField {
  int na = 0, nb = 0;
  std::vector<double> h;

  HeightField() = default;
  HeightField(int a, int b, double fill_value) : na(a), nb(b), h(size_t(a) * b, fill_value) {}
  double& at(int i, int j) { return h[size_t(wrap(i, na)) * nb + wrap(j, nb)]; }
  double at(int i, int j) const { return h[size_t(wrap(i, na)) * nb + wrap(j, nb)]; }
  double alpha(int i) const { return -M_PI + 2 * M_PI * i / na; }
  double beta(int j) const { return -M_PI + 2 * M_PI * j / nb; }
  int alpha_index(double a) const { return wrap(int(std::lround((a + M_PI) * na / (2 * M_PI))), na); }
  int beta_index(double b) const { return wrap(int(std::lround((b + M_PI) * nb / (2 * M_PI))), nb); }

  // Bilinear interpolation, periodic in both directions.
  double sample(double alpha, double beta) const {
    double x = (alpha + M_PI) * na / (2 * M_PI);
    double y = (beta + M_PI) * nb / (2 * M_PI);
    int i = int(std::floor(x)), j = int(std::floor(y));
    double fx = x - i, fy = y - j;
    return (1 - fx) * ((1 - fy) * at(i, j) + fy * at(i, j + 1)) +
           fx * ((1 - fy) * at(i + 1, j) + fy * at(i + 1, j + 1));
  }

  static int wrap(int i, int n) { return ((i % n) + n) % n; }
};

// The three tooth rows of one gear: merged inner row at beta = pi plus two
// outer rows at the contact longitudes, phased to mesh with the neighbors.
struct GearRows {
  ToothRowSpec inner;
  ToothRowSpec outer_neg;  // beta near -outer longitude
  ToothRowSpec outer_pos;
};

// Tooth height of one row at a chart point, or fallback outside its band.
double row_height(const ToothRowSpec& row, double alpha, double beta, double pitch_radius,
                  double fallback);

// Outer-row phases and shear rates found by sweeping each neighbor's inner
// row over the relative motion and reading the uncarved plateaus.
GearRows detect_rows(const DesignConfig& cfg, const GearDesign& d);

// Uncarved gear: tube surface with the three tooth rows stamped on it.
HeightField seed_field(const DesignConfig& cfg, const GearDesign& d, const GearRows& rows);

// Lower envelope of both neighbors' gap-inflated tooth rows over a full
// relative cycle, applied to the seed.
HeightField carve_field(const DesignConfig& cfg, const GearDesign& d, const GearRows& rows,
                        const HeightField& seed);

// Closed grid mesh of r = field(alpha, beta); outward oriented, torus topology.
TriMesh field_mesh(const TorusSpec& torus, const HeightField& field);

struct GearSolid {
  TorusSpec torus;  // ring 0
  GearRows rows;
  HeightField field;
  TriMesh mesh;
  bool hollow = false;
  std::string provenance;
};

GearSolid assemble_gear(const DesignConfig& cfg, const GearDesign& d, bool hollow);

// Exact transport of the master mesh onto another ring (120 degree steps).
TriMesh place_on_ring(const TriMesh& master, int ring);

// Smooth torus at the given tube radius, for clearance controls.
TriMesh torus_shell_mesh(const Circle3& core, double tube_radius, int na, int nb);

// One envelope flank traced from a closed curve riding the driver ring.
struct FlankCurve {
  std::vector<double> times;             // engaged window, uniform steps
  std::vector<Vec3> samples;             // closest approach to the target core
  std::vector<TubeCoords> chart_samples; // same points in the target chart
  std::vector<double> knots;             // fitted C1 piecewise cubic, per channel
  std::array<std::vector<double>, 3> node_value;  // alpha, beta, radial at knots
  std::array<std::vector<double>, 3> node_slope;
  double fit_residual = 0;

  TubeCoords eval(double t) const;
};

// Sweeps the curve through the relative motion (driver seen from the target),
// takes the point closest to the target core at each step, and fits a smooth
// chart curve through the engaged arc.
FlankCurve carve_flank(const std::vector<Vec3>& curve, const DesignConfig& cfg, int driver,
                       int target, double omega, int steps);

struct GearPatches {
  TorusSpec torus;
  double pitch_radius = 0;
  TriMesh mesh;
  int rows = 0, cols = 0;  // loft grid dimensions
};

// Lofts a radial stack of flank curves into a surface patch on the target
// torus, oriented out of the tooth material.
GearPatches flank_surface(const std::vector<FlankCurve>& flanks, const TorusSpec& torus,
                          double pitch_radius);

// Clamps tooth tips at the radius whose drafted footprint is the given pitch
// fraction wide, leaving a chart-flat top land.
GearPatches truncate_top_land(const GearPatches& patches, const ToothRowSpec& spec, double land);

}  // namespace tg
