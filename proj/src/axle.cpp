#include "triplegear/axle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "triplegear/error.hpp"
#include "triplegear/parallel.hpp"

namespace tg {

double axle_speed_ratio(int tooth_count, int starts) {
  if (tooth_count <= 0 || starts <= 0)
    throw Error(ErrorCode::InvalidInput, "axle_speed_ratio: counts must be positive");
  return -double(tooth_count) / starts;
}

double central_hole_radius(const DesignConfig& cfg) {
  const TorusSpec torus{cfg.circles[0], cfg.thickness};
  double best = 1e300;
  const int na = 2048, nb = 256;
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      Vec3 p = tube_point(torus, -M_PI + 2 * M_PI * i / na, -M_PI + 2 * M_PI * j / nb,
                          cfg.thickness);
      best = std::min(best, std::hypot(p.x, p.y));
    }
  return best;
}

std::vector<std::array<double, 2>> carve_axle_section(const DesignConfig& cfg,
                                                      const GearSolid& gear, const AxleSpec& seed,
                                                      double omega_gear, double omega_axle,
                                                      int steps) {
  if (steps < 360) throw Error(ErrorCode::InvalidInput, "carve_axle_section needs >= 360 steps");
  if (omega_gear == 0 || omega_axle == 0)
    throw Error(ErrorCode::InvalidInput, "carve_axle_section: zero speed");
  if (!(seed.outer_radius > 0) || seed.pitch == 0 || !(seed.length > 0))
    throw Error(ErrorCode::InvalidInput, "carve_axle_section: bad seed spec");
  const double hole = central_hole_radius(cfg);
  if (seed.outer_radius >= hole)
    throw Error(ErrorCode::AxleImpossible, "seed radius " + std::to_string(seed.outer_radius) +
                                               " does not fit the central hole (radius " +
                                               std::to_string(hole) + ")");

  const HeightField& field = gear.field;
  const TorusSpec& torus = gear.torus;

  // A full rotation cycle of one gear about its own axis sweeps an
  // axisymmetric tube whose radial profile is the field's per-meridian crest.
  // The blank, following its own screw motion, occupies a fixed region, so a
  // ray sample survives exactly when its whole helical fiber misses all three
  // swept tubes.
  std::vector<double> crest(static_cast<size_t>(field.nb));
  for (int j = 0; j < field.nb; ++j) {
    double c = 0;
    for (int i = 0; i < field.na; ++i) c = std::max(c, field.at(i, j));
    crest[static_cast<size_t>(j)] = c;
  }
  auto crest_at = [&](double beta) {
    double y = (beta + M_PI) * field.nb / (2 * M_PI);
    int j = static_cast<int>(std::floor(y));
    double fy = y - j;
    return (1 - fy) * crest[static_cast<size_t>(HeightField::wrap(j, field.nb))] +
           fy * crest[static_cast<size_t>(HeightField::wrap(j + 1, field.nb))];
  };

  const double margin = 0.008;
  double zmax = 0;
  for (int i = 0; i < field.na; ++i)
    for (int j = 0; j < field.nb; ++j)
      zmax = std::max(zmax, std::abs(tube_point(torus, field.alpha(i), field.beta(j),
                                                crest[static_cast<size_t>(j)]).z));
  const double zspan = zmax + 0.05;

  // Axial prefilter: the closest approach of any swept tube to the z axis,
  // binned by height. Each radial ray of the tube is a straight segment, so
  // its interior closest approach must be sampled, not just its endpoints.
  // The three rings are z rotations of each other; one ring's table serves all.
  const int nzbin = 256;
  std::vector<double> min_cyl(static_cast<size_t>(nzbin), 1e300);
  auto record = [&](double cyl, double z) {
    int b = static_cast<int>((z + zspan) / (2 * zspan) * nzbin);
    if (b < 0 || b >= nzbin) return;
    min_cyl[static_cast<size_t>(b)] = std::min(min_cyl[static_cast<size_t>(b)], cyl);
  };
  for (int i = 0; i < field.na; ++i)
    for (int j = 0; j < field.nb; ++j) {
      Vec3 p0 = tube_point(torus, field.alpha(i), field.beta(j), 0);
      Vec3 p1 = tube_point(torus, field.alpha(i), field.beta(j), crest[static_cast<size_t>(j)]);
      record(std::hypot(p0.x, p0.y), p0.z);
      record(std::hypot(p1.x, p1.y), p1.z);
      double dx = p1.x - p0.x, dy = p1.y - p0.y;
      double dd = dx * dx + dy * dy;
      if (dd > 0) {
        double s = std::clamp(-(p0.x * dx + p0.y * dy) / dd, 0.0, 1.0);
        Vec3 ps{p0.x + s * dx, p0.y + s * dy, p0.z + s * (p1.z - p0.z)};
        record(std::hypot(ps.x, ps.y), ps.z);
      }
    }
  std::vector<double> cyl_bound(static_cast<size_t>(nzbin));
  for (int b = 0; b < nzbin; ++b) {
    double m = 1e300;
    for (int o = -2; o <= 2; ++o) {
      int bb = b + o;
      if (bb >= 0 && bb < nzbin) m = std::min(m, min_cyl[static_cast<size_t>(bb)]);
    }
    cyl_bound[static_cast<size_t>(b)] = m - 0.04;  // surface-grid slack
  }

  std::array<RigidMotion, 3> unplace;
  for (int r = 0; r < 3; ++r)
    unplace[static_cast<size_t>(r)] =
        rotation_about_axis(Vec3{0, 0, 0}, Vec3{0, 0, 1}, -2 * M_PI * r / 3);
  auto blocked = [&](const Vec3& w) {
    for (int r = 0; r < 3; ++r) {
      TubeCoords tc = tube_coords_of(torus, unplace[static_cast<size_t>(r)](w));
      if (tc.radial <= crest_at(tc.beta) + margin) return true;
    }
    return false;
  };

  const int ntheta = 512, nr = 160;
  const double dr = seed.outer_radius / (nr - 1);
  std::vector<double> rmax(static_cast<size_t>(ntheta), seed.outer_radius);
  parallel_for(0, ntheta, [&](int k) {
    const double theta = 2 * M_PI * k / ntheta;
    double& bound = rmax[static_cast<size_t>(k)];
    for (int j = nr - 1; j >= 1; --j) {
      const double r = j * dr;
      // Fiber steps short enough that no tube feature slips between samples.
      const double arc = std::sqrt(1 + (2 * M_PI * r / seed.pitch) * (2 * M_PI * r / seed.pitch));
      const int nu = std::max(steps, static_cast<int>(std::ceil(2 * zspan * arc / (0.5 * margin))));
      bool hit = false;
      for (int s = 0; s <= nu && !hit; ++s) {
        const double u = -zspan + 2 * zspan * s / nu;
        const int b = std::clamp(static_cast<int>((u + zspan) / (2 * zspan) * nzbin), 0, nzbin - 1);
        if (cyl_bound[static_cast<size_t>(b)] > r + margin) continue;
        const double a = theta + 2 * M_PI * u / seed.pitch;
        hit = blocked({r * std::cos(a), r * std::sin(a), u});
      }
      if (hit) bound = std::min(bound, r - 0.5 * dr);
    }
  });

  std::vector<std::array<double, 2>> section(static_cast<size_t>(ntheta));
  for (int k = 0; k < ntheta; ++k) {
    const double r = rmax[static_cast<size_t>(k)];
    if (r < 4 * dr)
      throw Error(ErrorCode::AxleImpossible, "carve leaves no material around the axis");
    section[static_cast<size_t>(k)] = {r * std::cos(2 * M_PI * k / ntheta),
                                       r * std::sin(2 * M_PI * k / ntheta)};
  }
  return section;
}

namespace {

bool segments_cross(const std::array<double, 2>& a, const std::array<double, 2>& b,
                    const std::array<double, 2>& c, const std::array<double, 2>& d) {
  auto orient = [](const std::array<double, 2>& p, const std::array<double, 2>& q,
                   const std::array<double, 2>& r) {
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
  };
  const double o1 = orient(a, b, c), o2 = orient(a, b, d);
  const double o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

}  // namespace

TriMesh axle_mesh(const std::vector<std::array<double, 2>>& section, const AxleSpec& spec,
                  int layers) {
  const int m = static_cast<int>(section.size());
  if (m < 3 || layers < 2) throw Error(ErrorCode::InvalidInput, "axle_mesh: degenerate input");
  for (int i = 0; i < m; ++i)
    for (int j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;
      if (segments_cross(section[static_cast<size_t>(i)], section[static_cast<size_t>((i + 1) % m)],
                         section[static_cast<size_t>(j)], section[static_cast<size_t>((j + 1) % m)]))
        throw Error(ErrorCode::InvalidProfile, "axle section self-intersects");
    }

  TriMesh mesh;
  mesh.vertices.reserve(static_cast<size_t>(layers) * m + 2);
  const double dz = spec.length / (layers - 1);
  for (int k = 0; k < layers; ++k) {
    const double z = -0.5 * spec.length + k * dz;
    const double phi = 2 * M_PI * z / spec.pitch;
    const double cp = std::cos(phi), sp = std::sin(phi);
    for (int i = 0; i < m; ++i) {
      const auto& v = section[static_cast<size_t>(i)];
      mesh.vertices.push_back({cp * v[0] - sp * v[1], sp * v[0] + cp * v[1], z});
    }
  }
  auto id = [&](int k, int i) { return static_cast<uint32_t>(k * m + (i % m + m) % m); };
  for (int k = 0; k + 1 < layers; ++k)
    for (int i = 0; i < m; ++i) {
      mesh.triangles.push_back({id(k, i), id(k + 1, i), id(k + 1, i + 1)});
      mesh.triangles.push_back({id(k, i), id(k + 1, i + 1), id(k, i + 1)});
    }
  const uint32_t bottom = static_cast<uint32_t>(mesh.vertices.size());
  mesh.vertices.push_back({0, 0, -0.5 * spec.length});
  const uint32_t top = bottom + 1;
  mesh.vertices.push_back({0, 0, 0.5 * spec.length});
  for (int i = 0; i < m; ++i) {
    mesh.triangles.push_back({bottom, id(0, i), id(0, i + 1)});
    mesh.triangles.push_back({top, id(layers - 1, i + 1), id(layers - 1, i)});
  }
  if (mesh.signed_volume() < 0)
    for (auto& t : mesh.triangles) std::swap(t[1], t[2]);

  MeshReport report = validate(mesh);
  if (!report.watertight || !report.orientation_consistent || report.euler_characteristic != 2)
    throw Error(ErrorCode::NonWatertight, "axle mesh failed validation");
  return mesh;
}

}  // namespace tg
