#pragma once

#include <functional>
#include <string>
#include <vector>

#include "triplegear/geom.hpp"
#include "triplegear/mesh.hpp"
#include "triplegear/optimizer.hpp"

namespace tg {

using MotionFn = std::function<RigidMotion(double)>;

// Sampled one-parameter family of rigid motions.
struct MotionTrace {
  std::vector<double> times;
  std::vector<RigidMotion> motions;
};

// Rotation of ring `ring` about its own core axis by omega*t.
RigidMotion ring_movement(const DesignConfig& cfg, int ring, double omega, double t);

// Motion of ring b as seen from ring a: inverse(ring_a(t)) o ring_b(t).
RigidMotion relative_motion(const DesignConfig& cfg, int a, int b, double omega, double t);

MotionTrace sample_trace(const MotionFn& fn, double period, int samples);

// max(rotation Frobenius difference, translation difference).
double operator_distance(const RigidMotion& a, const RigidMotion& b);

// True iff the sampled family satisfies the group law g_{s+t} = g_s o g_t
// within tol at every sampled pair. Requires a uniform grid from t=0 with
// at least 64 samples.
bool is_simple(const MotionTrace& trace, double tol);

// Worst group-law residual over sampled pairs (the quantity is_simple thresholds).
double group_law_residual(const MotionTrace& trace);

// Path of a point fixed in ring a's frame, watched from ring b's frame.
std::vector<Vec3> trace_point(const Vec3& p, const DesignConfig& cfg, int a, int b, double omega,
                              const std::vector<double>& times);

struct ClearanceSweep {
  double clearance = 0;
  double time = 0;
  int step = 0;
  std::vector<double> per_step;  // one clearance value per sampled instant
};

// Minimum vertex-to-triangle signed clearance over one period sampled at
// `steps` instants, with each mesh carried by its motion. Negative values
// mean a vertex sits inside the other mesh. inside_band <= 0 picks a bound
// from the mesh sizes.
ClearanceSweep min_clearance_sweep(const TriMesh& mesh_a, const MotionFn& motion_a,
                                   const TriMesh& mesh_b, const MotionFn& motion_b, double period,
                                   int steps, double inside_band = -1);

// Rings 0 and 1 of cfg under the synchronized rotation.
ClearanceSweep min_clearance(const TriMesh& mesh_a, const TriMesh& mesh_b, const DesignConfig& cfg,
                             double omega, int steps);

// Same sweep for an arbitrary ring pair, with an optional phase offset
// injected on ring b (models assembly error / backlash probing).
ClearanceSweep ring_pair_clearance(const TriMesh& mesh_a, const TriMesh& mesh_b,
                                   const DesignConfig& cfg, int ring_a, int ring_b, double omega,
                                   int steps, double phase_offset_b = 0);

// CSV rows: step,time,pair,clearance. One block per named pair.
void write_clearance_csv(const std::string& path,
                         const std::vector<std::pair<std::string, ClearanceSweep>>& sweeps,
                         double period);

}  // namespace tg
