#include "triplegear/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "triplegear/bvh.hpp"
#include "triplegear/error.hpp"
#include "triplegear/parallel.hpp"

namespace tg {

RigidMotion ring_movement(const DesignConfig& cfg, int ring, double omega, double t) {
  if (ring < 0 || ring > 2) throw Error(ErrorCode::InvalidInput, "ring index out of range");
  const Circle3& c = cfg.circles[static_cast<std::size_t>(ring)];
  return rotation_about_axis(c.center, c.normal(), omega * t);
}

RigidMotion relative_motion(const DesignConfig& cfg, int a, int b, double omega, double t) {
  const RigidMotion ma = ring_movement(cfg, a, omega, t);
  const RigidMotion mb = ring_movement(cfg, b, omega, t);
  return compose(ma.inverse(), mb);
}

MotionTrace sample_trace(const MotionFn& fn, double period, int samples) {
  if (!fn || samples < 2 || period <= 0)
    throw Error(ErrorCode::InvalidInput, "sample_trace: bad arguments");
  MotionTrace trace;
  trace.times.reserve(static_cast<std::size_t>(samples));
  trace.motions.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double t = period * i / (samples - 1);
    trace.times.push_back(t);
    trace.motions.push_back(fn(t));
  }
  return trace;
}

double operator_distance(const RigidMotion& a, const RigidMotion& b) {
  const double rot = frobenius_dist(a.rotation, b.rotation);
  const double trans = dist(a.translation, b.translation);
  return std::max(rot, trans);
}

namespace {

void check_uniform_from_zero(const MotionTrace& trace) {
  const std::size_t n = trace.times.size();
  if (n < 64 || trace.motions.size() != n)
    throw Error(ErrorCode::InvalidInput, "trace needs >= 64 uniform samples");
  if (std::abs(trace.times[0]) > 1e-12)
    throw Error(ErrorCode::InvalidInput, "trace must start at t = 0");
  const double dt = trace.times[1] - trace.times[0];
  if (dt <= 0) throw Error(ErrorCode::InvalidInput, "trace times must increase");
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(trace.times[i] - static_cast<double>(i) * dt) > 1e-9 * (1 + std::abs(trace.times[i])))
      throw Error(ErrorCode::InvalidInput, "trace grid is not uniform");
  }
}

}  // namespace

double group_law_residual(const MotionTrace& trace) {
  check_uniform_from_zero(trace);
  const std::size_t n = trace.times.size();
  double worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; i + j < n; ++j) {
      const RigidMotion composed = compose(trace.motions[i], trace.motions[j]);
      worst = std::max(worst, operator_distance(trace.motions[i + j], composed));
    }
  }
  return worst;
}

bool is_simple(const MotionTrace& trace, double tol) {
  if (tol <= 0) throw Error(ErrorCode::InvalidInput, "is_simple: tol must be positive");
  return group_law_residual(trace) < tol;
}

std::vector<Vec3> trace_point(const Vec3& p, const DesignConfig& cfg, int a, int b, double omega,
                              const std::vector<double>& times) {
  std::vector<Vec3> path;
  path.reserve(times.size());
  for (double t : times) path.push_back(relative_motion(cfg, b, a, omega, t)(p));
  return path;
}

namespace {

// Area-weighted outward vertex normals; valid for consistently wound meshes.
std::vector<Vec3> vertex_normals(const TriMesh& mesh) {
  std::vector<Vec3> normals(mesh.vertices.size(), Vec3{0, 0, 0});
  for (const auto& tri : mesh.triangles) {
    const Vec3 n = cross(mesh.vertices[tri[1]] - mesh.vertices[tri[0]],
                         mesh.vertices[tri[2]] - mesh.vertices[tri[0]]);
    for (std::uint32_t idx : tri) normals[idx] = normals[idx] + n;
  }
  for (Vec3& n : normals) {
    const double len = norm(n);
    if (len > 0) n = n / len;
  }
  return normals;
}

double bbox_diag(const TriMesh& mesh) {
  Aabb box;
  for (const Vec3& v : mesh.vertices) box.grow(v);
  return dist(box.lo, box.hi);
}

// Signed clearance of one transformed vertex cloud against a static mesh.
// On-surface vertices (d < graze) are disambiguated by nudging along the
// cloud's inward normal: coincident interiors go negative, tangent contact
// stays non-negative.
double cloud_clearance(const std::vector<Vec3>& points, const std::vector<Vec3>& inward,
                       const MeshBvh& bvh, double inside_band, double graze, double nudge) {
  double worst = 1e300;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3& p = points[i];
    const double d = bvh.distance(p, std::min(worst + inside_band, 1e300));
    if (d > inside_band) {
      worst = std::min(worst, d);
      continue;
    }
    double signed_d = d;
    if (d <= graze) {
      if (bvh.contains(p + inward[i] * nudge)) signed_d = -d - nudge;
    } else if (bvh.contains(p)) {
      signed_d = -d;
    }
    worst = std::min(worst, signed_d);
  }
  return worst;
}

}  // namespace

ClearanceSweep min_clearance_sweep(const TriMesh& mesh_a, const MotionFn& motion_a,
                                   const TriMesh& mesh_b, const MotionFn& motion_b, double period,
                                   int steps, double inside_band) {
  if (steps < 36) throw Error(ErrorCode::InvalidInput, "clearance sweep needs >= 36 steps");
  if (mesh_a.triangles.empty() || mesh_b.triangles.empty())
    throw Error(ErrorCode::InvalidInput, "clearance sweep over empty mesh");
  const double diag = std::max(bbox_diag(mesh_a), bbox_diag(mesh_b));
  if (inside_band <= 0) inside_band = 0.1 * diag;
  const double graze = 1e-9 * diag;
  const double nudge = 1e-7 * diag;

  const MeshBvh bvh_a(mesh_a);
  const MeshBvh bvh_b(mesh_b);
  const std::vector<Vec3> normals_a = vertex_normals(mesh_a);
  const std::vector<Vec3> normals_b = vertex_normals(mesh_b);

  ClearanceSweep sweep;
  sweep.per_step.assign(static_cast<std::size_t>(steps), 0.0);
  parallel_for(0, steps, [&](int s) {
    const double t = period * s / steps;
    // Pull everything into B's frame (resp. A's) so both trees stay static.
    const RigidMotion a_in_b = compose(motion_b(t).inverse(), motion_a(t));
    const RigidMotion b_in_a = a_in_b.inverse();

    std::vector<Vec3> pts(mesh_a.vertices.size());
    std::vector<Vec3> inward(mesh_a.vertices.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      pts[i] = a_in_b(mesh_a.vertices[i]);
      inward[i] = a_in_b.rotation * (-normals_a[i]);
    }
    double best = cloud_clearance(pts, inward, bvh_b, inside_band, graze, nudge);

    pts.resize(mesh_b.vertices.size());
    inward.resize(mesh_b.vertices.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      pts[i] = b_in_a(mesh_b.vertices[i]);
      inward[i] = b_in_a.rotation * (-normals_b[i]);
    }
    best = std::min(best, cloud_clearance(pts, inward, bvh_a, inside_band, graze, nudge));
    sweep.per_step[static_cast<std::size_t>(s)] = best;
  });

  sweep.clearance = sweep.per_step[0];
  sweep.step = 0;
  for (int s = 1; s < steps; ++s) {
    if (sweep.per_step[static_cast<std::size_t>(s)] < sweep.clearance) {
      sweep.clearance = sweep.per_step[static_cast<std::size_t>(s)];
      sweep.step = s;
    }
  }
  sweep.time = period * sweep.step / steps;
  return sweep;
}

ClearanceSweep min_clearance(const TriMesh& mesh_a, const TriMesh& mesh_b, const DesignConfig& cfg,
                             double omega, int steps) {
  return ring_pair_clearance(mesh_a, mesh_b, cfg, 0, 1, omega, steps);
}

ClearanceSweep ring_pair_clearance(const TriMesh& mesh_a, const TriMesh& mesh_b,
                                   const DesignConfig& cfg, int ring_a, int ring_b, double omega,
                                   int steps, double phase_offset_b) {
  if (omega == 0) throw Error(ErrorCode::InvalidInput, "omega must be nonzero");
  const double period = 2 * std::numbers::pi / std::abs(omega);
  const MotionFn ma = [&cfg, ring_a, omega](double t) {
    return ring_movement(cfg, ring_a, omega, t);
  };
  const MotionFn mb = [&cfg, ring_b, omega, phase_offset_b](double t) {
    return ring_movement(cfg, ring_b, omega, t + phase_offset_b / omega);
  };
  return min_clearance_sweep(mesh_a, ma, mesh_b, mb, period, steps);
}

void write_clearance_csv(const std::string& path,
                         const std::vector<std::pair<std::string, ClearanceSweep>>& sweeps,
                         double period) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot open for writing: " + path);
  out << "step,time,pair,clearance\n";
  char buf[128];
  for (const auto& [pair_name, sweep] : sweeps) {
    const int steps = static_cast<int>(sweep.per_step.size());
    for (int s = 0; s < steps; ++s) {
      const double t = period * s / steps;
      std::snprintf(buf, sizeof buf, "%d,%.12g,%s,%.12g\n", s, t, pair_name.c_str(),
                    sweep.per_step[static_cast<std::size_t>(s)]);
      out << buf;
    }
  }
  if (!out) throw Error(ErrorCode::InvalidInput, "write failed: " + path);
}

}  // namespace tg
