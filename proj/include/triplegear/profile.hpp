#pragma once

#include <vector>

#include "triplegear/geom.hpp"

namespace tg {

struct ChartPoint {
  double alpha = 0;
  double beta = 0;
};

// One closed polyline per tooth, wound counterclockwise in the chart.
struct ChartPattern {
  std::vector<std::vector<ChartPoint>> loops;
};

// Tooth row along one longitude. Teeth are drafted sheared blocks: the chart
// footprint shrinks linearly between the pitch surface and the tip/root, so
// walls have slope 1/draft (chart radians per unit tube radius).
struct ToothRowSpec {
  double longitude = 0;          // beta at the row center
  int tooth_count = 12;
  double addendum = 0;           // radial rise above the pitch surface
  double dedendum = 0;           // radial drop of the root below pitch
  double flank_slope = 0;        // d(alpha)/d(beta) shear of the tooth axis
  double top_land_fraction = 0.2;
  double fill = 0.5;             // tooth arc fraction of the pitch at pitch level
  double band_halfwidth = 0.25;  // beta halfwidth of the block at pitch level
  double phase = 0;              // alpha of tooth 0's center

  double pitch() const { return 2 * M_PI / tooth_count; }
  // Wall slope making the tip footprint (fill - top_land_fraction) of a pitch.
  double draft() const { return (fill - top_land_fraction) * 0.5 * pitch() / addendum; }
};

// Closed tooth outlines at the pitch level: N sheared rectangles along the
// row. merged_inner centers the row on the inner longitude beta = pi.
ChartPattern master_tooth_profile(const ToothRowSpec& spec, bool merged_inner);

// Outline at an arbitrary tube radius between root and tip (drafted walls
// shrink the footprint above the pitch surface and grow it below).
ChartPattern profile_at_radius(const ToothRowSpec& spec, bool merged_inner, double pitch_radius,
                               double radius);

// Outward normal offset with arc joins at convex corners; every output vertex
// is at chart distance exactly `gap` from the input loop.
ChartPattern offset_profile(const ChartPattern& pattern, double gap);

// True if any two segments (within or across loops) properly intersect.
bool pattern_self_intersects(const ChartPattern& pattern);

// Chart loop realized on a ring's torus at the given tube radius.
std::vector<Vec3> realize_loop(const TorusSpec& torus, const std::vector<ChartPoint>& loop,
                               double radial);

double polygon_signed_area(const std::vector<ChartPoint>& loop);
double point_to_loop_distance(const ChartPoint& p, const std::vector<ChartPoint>& loop);

}  // namespace tg
