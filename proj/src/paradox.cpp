#include "triplegear/paradox.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "triplegear/axle.hpp"
#include "triplegear/bvh.hpp"
#include "triplegear/error.hpp"
#include "triplegear/geom.hpp"

namespace tg {
namespace {

// Involute of the base circle: radius rb*sqrt(1+u^2), polar angle
// phi0 + sign*(u - atan u).
std::array<double, 2> involute_point(double rb, double phi0, double u, int sign) {
  const double a = phi0 + sign * u;
  if (sign > 0) return {rb * (std::cos(a) + u * std::sin(a)), rb * (std::sin(a) - u * std::cos(a))};
  return {rb * (std::cos(a) - u * std::sin(a)), rb * (std::sin(a) + u * std::cos(a))};
}

double pt_seg_dist2(const std::array<double, 2>& p, const std::array<double, 2>& a,
                    const std::array<double, 2>& b) {
  const double ex = b[0] - a[0], ey = b[1] - a[1];
  const double len2 = ex * ex + ey * ey;
  double t = len2 > 0 ? ((p[0] - a[0]) * ex + (p[1] - a[1]) * ey) / len2 : 0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = p[0] - a[0] - t * ex, dy = p[1] - a[1] - t * ey;
  return dx * dx + dy * dy;
}

bool point_in_polygon(const std::array<double, 2>& p,
                      const std::vector<std::array<double, 2>>& poly) {
  bool in = false;
  for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const auto &a = poly[i], &b = poly[j];
    if ((a[1] > p[1]) != (b[1] > p[1]) &&
        p[0] < (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0])
      in = !in;
  }
  return in;
}

// Clearance between two co-rotated copies of the profile, axes dist apart.
// Negative means the sections overlap; only points that can reach across
// the gap participate.
double section_clearance(const InvoluteProfile& prof, double dist, double theta) {
  const auto& poly = prof.polygon;
  const size_t n = poly.size();
  const double c = std::cos(theta), s = std::sin(theta);
  std::vector<std::array<double, 2>> rot(n);
  for (size_t i = 0; i < n; ++i)
    rot[i] = {c * poly[i][0] - s * poly[i][1], s * poly[i][0] + c * poly[i][1]};
  const double reach = dist - prof.tip_radius - 1e-9;

  double best2 = 1e300;
  bool any = false;
  for (size_t i = 0; i < n; ++i) {
    if (std::hypot(rot[i][0], rot[i][1]) < reach) continue;
    std::array<double, 2> p = {rot[i][0] - dist, rot[i][1]};  // into b's frame
    any = true;
    for (size_t j = 0, k = n - 1; j < n; k = j++)
      best2 = std::min(best2, pt_seg_dist2(p, rot[k], rot[j]));
    if (point_in_polygon(p, rot)) return -std::sqrt(best2);
  }
  // Same pass with the roles swapped; the translated configuration is not
  // symmetric under exchanging the copies.
  for (size_t i = 0; i < n; ++i) {
    if (std::hypot(rot[i][0], rot[i][1]) < reach) continue;
    std::array<double, 2> p = {rot[i][0] + dist, rot[i][1]};
    any = true;
    for (size_t j = 0, k = n - 1; j < n; k = j++)
      best2 = std::min(best2, pt_seg_dist2(p, rot[k], rot[j]));
    if (point_in_polygon(p, rot)) return -std::sqrt(best2);
  }
  return any ? std::sqrt(best2) : 1e300;
}

double min_section_clearance(const InvoluteProfile& prof, double dist, int theta_samples) {
  const double period = 2 * M_PI / prof.tooth_count;
  double worst = 1e300;
  for (int k = 0; k < theta_samples; ++k)
    worst = std::min(worst, section_clearance(prof, dist, period * k / theta_samples));
  return worst;
}

}  // namespace

InvoluteProfile involute_profile(double base_radius, int tooth_count, double tip_radius,
                                 int flank_samples) {
  if (!(base_radius > 0) || !(tip_radius > base_radius))
    throw Error(ErrorCode::InvalidInput, "involute profile needs 0 < base radius < tip radius");
  if (tooth_count < 1 || flank_samples < 4)
    throw Error(ErrorCode::InvalidInput, "involute profile needs teeth and flank samples");
  const double rb = base_radius;
  const double half_base = M_PI / (2 * tooth_count);
  const double u_max = std::sqrt(tip_radius * tip_radius / (rb * rb) - 1);
  const double inv_max = u_max - std::atan(u_max);
  if (inv_max >= half_base)
    throw Error(ErrorCode::InvalidProfile, "involute flanks cross below the tip radius");

  InvoluteProfile prof;
  prof.base_radius = rb;
  prof.tip_radius = tip_radius;
  prof.tooth_count = tooth_count;

  const double root_arc = 2 * M_PI / tooth_count - 2 * half_base;
  const double tip_arc = 2 * (half_base - inv_max);
  const int n_root = std::max(2, int(std::ceil(root_arc / 0.02)));
  const int n_tip = std::max(2, int(std::ceil(tip_arc / 0.02)));

  for (int k = 0; k < tooth_count; ++k) {
    const double center = 2 * M_PI * k / tooth_count;
    const double lead0 = center - half_base;
    const double trail0 = center + half_base;
    // Root arc from the previous tooth up to this tooth's leading flank.
    const double arc0 = center - 2 * M_PI / tooth_count + half_base;
    for (int i = 0; i < n_root; ++i) {
      double a = arc0 + root_arc * i / n_root;
      prof.polygon.push_back({rb * std::cos(a), rb * std::sin(a)});
    }
    // Leading flank root to tip; arc length grows like u^2, so sample in sqrt.
    for (int i = 0; i < flank_samples; ++i) {
      double u = u_max * std::sqrt(double(i) / flank_samples);
      prof.polygon.push_back(involute_point(rb, lead0, u, +1));
      if (u > 1e-9) prof.flank_samples.push_back({prof.polygon.back(), lead0, u, +1});
    }
    // Tip arc.
    const double tip0 = lead0 + inv_max;
    for (int i = 0; i < n_tip; ++i) {
      double a = tip0 + tip_arc * i / n_tip;
      prof.polygon.push_back({tip_radius * std::cos(a), tip_radius * std::sin(a)});
    }
    // Trailing flank tip to root.
    for (int i = 0; i < flank_samples; ++i) {
      double u = u_max * std::sqrt(double(flank_samples - i) / flank_samples);
      prof.polygon.push_back(involute_point(rb, trail0, u, -1));
      prof.flank_samples.push_back({prof.polygon.back(), trail0, u, -1});
    }
  }
  return prof;
}

double tangent_center_distance(const InvoluteProfile& profile) {
  if (profile.polygon.size() < 6)
    throw Error(ErrorCode::InvalidInput, "tangent spacing needs a built profile");
  double lo = 2 * profile.base_radius;
  double hi = 2 * profile.tip_radius;
  const int theta_samples = 360;
  if (!(min_section_clearance(profile, lo, theta_samples) < 0))
    throw Error(ErrorCode::FitFailure, "tangent spacing: sections never overlap at the base");
  for (int it = 0; it < 45 && hi - lo > 1e-9; ++it) {
    double mid = 0.5 * (lo + hi);
    (min_section_clearance(profile, mid, theta_samples) < 0 ? lo : hi) = mid;
  }
  return hi;
}

ScrewTriple paradox_screws(const InvoluteProfile& profile, double pitch, double height,
                           double center_distance) {
  if (profile.polygon.size() < 6)
    throw Error(ErrorCode::InvalidInput, "paradox screws need a built profile");
  if (pitch == 0 || !(height > 0))
    throw Error(ErrorCode::InvalidInput, "paradox screws need a nonzero pitch and height");
  if (std::abs(pitch) > profile.tooth_count * height)
    throw Error(ErrorCode::InvalidSpacing,
                "twist covers less than one tooth period over the height");
  double dist = center_distance > 0 ? center_distance : tangent_center_distance(profile);
  if (dist <= profile.tip_radius)
    throw Error(ErrorCode::InvalidSpacing, "axes closer than the tip radius: the screws overlap");
  if (dist >= 2 * profile.tip_radius)
    throw Error(ErrorCode::InvalidSpacing, "axes too far apart for the tips to meet");

  AxleSpec spec;
  spec.pitch = pitch;
  spec.length = height;
  spec.starts = profile.tooth_count;
  spec.outer_radius = profile.tip_radius;
  const int layers =
      1 + std::clamp(int(std::ceil(std::abs(2 * M_PI * height / pitch) / 0.02)), 8, 512);
  ScrewTriple triple;
  triple.axes = {Vec3{0, 0, 0}, Vec3{dist, 0, 0}, Vec3{0.5 * dist, 0.5 * std::sqrt(3.0) * dist, 0}};
  triple.screws[0] = axle_mesh(profile.polygon, spec, layers);
  for (int i : {1, 2}) {
    triple.screws[size_t(i)] = triple.screws[0];
    for (Vec3& v : triple.screws[size_t(i)].vertices) {
      v.x += triple.axes[size_t(i)].x;
      v.y += triple.axes[size_t(i)].y;
    }
  }
  triple.center_distance = dist;
  triple.pitch = pitch;
  triple.height = height;
  return triple;
}

std::vector<ContactSample> contact_normal_report(const TriMesh& mesh_a, const Vec3& axis_a,
                                                 const TriMesh& mesh_b, const Vec3& axis_b,
                                                 int samples, double ratio_b, double threshold,
                                                 double period) {
  if (samples < 8) throw Error(ErrorCode::InvalidInput, "contact report needs at least 8 samples");
  if (mesh_a.vertices.empty() || mesh_b.vertices.empty())
    throw Error(ErrorCode::InvalidInput, "contact report needs two meshes");
  Vec3 center_dir = {axis_b.x - axis_a.x, axis_b.y - axis_a.y, 0};
  const double center_len = std::hypot(center_dir.x, center_dir.y);
  if (center_len < 1e-12)
    throw Error(ErrorCode::InvalidInput, "contact report needs distinct vertical axes");
  center_dir = center_dir / center_len;

  // Rotation about axis_b preserves axis distance, so vertices that stay off
  // b's bounding cylinder can be skipped before any surface query.
  double reach_b = 0;
  for (const Vec3& v : mesh_b.vertices)
    reach_b = std::max(reach_b, std::hypot(v.x - axis_b.x, v.y - axis_b.y));

  MeshBvh bvh(mesh_b);
  const Vec3 zdir{0, 0, 1};
  std::vector<ContactSample> report;
  report.reserve(static_cast<size_t>(samples));
  double worst = -1e300;
  double worst_phase = 0;
  for (int s = 0; s < samples; ++s) {
    const double phase = period * s / samples;
    RigidMotion ra = rotation_about_axis(axis_a, zdir, phase);
    RigidMotion rb = rotation_about_axis(axis_b, zdir, ratio_b * phase);
    RigidMotion into_b = rb.inverse();
    double best = 1e300;
    Vec3 best_q{0, 0, 0}, best_w{0, 0, 0};
    for (const Vec3& v : mesh_a.vertices) {
      Vec3 w = ra(v);
      double axis_gap = std::hypot(w.x - axis_b.x, w.y - axis_b.y) - reach_b;
      if (axis_gap > std::max(best, threshold)) continue;
      Vec3 q = into_b(w);
      double d = bvh.signed_distance(q, std::max(threshold, 0.05));
      if (d < best) {
        best = d;
        best_q = q;
        best_w = w;
      }
    }
    ContactSample cs;
    cs.phase = phase;
    cs.clearance = best;
    cs.witness_a = best_w;
    cs.witness_b = rb(bvh.closest_point(best_q));
    Vec3 n = cs.witness_b - cs.witness_a;
    n.z = 0;
    double nt = std::hypot(n.x, n.y);
    cs.contact_angle_deg =
        nt < 1e-12 ? 90.0
                   : std::acos(std::clamp(
                         std::abs((n.x * center_dir.x + n.y * center_dir.y) / nt), 0.0, 1.0)) *
                         180.0 / M_PI;
    if (best > worst) {
      worst = best;
      worst_phase = phase;
    }
    report.push_back(cs);
  }
  if (worst > threshold)
    throw Error(ErrorCode::NoContact,
                "pair separates to " + std::to_string(worst) + " at phase " +
                    std::to_string(worst_phase) + " (threshold " + std::to_string(threshold) + ")");
  return report;
}

void write_contact_csv(const std::string& path, const std::vector<ContactSample>& report) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot open for writing: " + path);
  out << "phase,contact_angle_deg,clearance\n";
  char buf[128];
  for (const ContactSample& cs : report) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", cs.phase, cs.contact_angle_deg,
                  cs.clearance);
    out << buf;
  }
}

}  // namespace tg
