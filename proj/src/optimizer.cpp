#include "triplegear/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "triplegear/circle_distance.hpp"
#include "triplegear/error.hpp"
#include "triplegear/parallel.hpp"

namespace tg {

std::array<Circle3, 3> symmetric_config(const SymmetricParams& p) {
  Circle3 c1;
  c1.center = {p.r, 0, 0};
  c1.radius = 1;
  c1.u_axis = {std::cos(p.phi), std::sin(p.phi), 0};
  c1.v_axis = {-std::sin(p.phi) * std::sin(p.theta), std::cos(p.phi) * std::sin(p.theta),
               std::cos(p.theta)};
  std::array<Circle3, 3> out{c1, c1, c1};
  for (int k = 1; k < 3; ++k) {
    RigidMotion rot = rotation_about_axis({0, 0, 0}, {0, 0, 1}, 2 * M_PI / 3 * k);
    out[k].center = rot(c1.center);
    out[k].u_axis = rot.rotation * c1.u_axis;
    out[k].v_axis = rot.rotation * c1.v_axis;
  }
  return out;
}

double objective(const SymmetricParams& p) {
  auto c = symmetric_config(p);
  if (!circles_linked(c[0], c[1])) return -std::numeric_limits<double>::infinity();
  return circle_circle_distance(c[0], c[1], 1e-10).distance;
}

namespace {

struct SearchResult {
  SymmetricParams params;
  double value = -std::numeric_limits<double>::infinity();
};

SearchResult pattern_search(SymmetricParams start, bool fix_phi_zero, double tol) {
  if (fix_phi_zero) start.phi = 0;
  double f = objective(start);
  SearchResult res{start, f};
  if (!std::isfinite(f)) return res;

  double steps[3] = {0.05, 0.05, 0.05};  // r, phi, theta
  auto get = [](SymmetricParams& p, int i) -> double& {
    return i == 0 ? p.r : (i == 1 ? p.phi : p.theta);
  };
  while (steps[0] > tol || steps[1] > tol || steps[2] > tol) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < 3; ++i) {
        if (i == 1 && fix_phi_zero) continue;
        for (double sgn : {1.0, -1.0}) {
          SymmetricParams probe = res.params;
          get(probe, i) += sgn * steps[i];
          if (probe.r <= 0) continue;
          double v = objective(probe);
          if (v > res.value) {
            res.params = probe;
            res.value = v;
            improved = true;
            break;
          }
        }
      }
    }
    for (double& s : steps) s *= 0.5;
  }
  return res;
}

}  // namespace

DesignConfig maximize_thickness(const SymmetricParams& init, bool fix_phi_zero, double tol) {
  if (tol <= 0) throw Error(ErrorCode::InvalidInput, "maximize_thickness: tol must be > 0");

  // Deterministic perturbed seeds around init.
  std::vector<SymmetricParams> seeds;
  seeds.push_back(init);
  const double dr[] = {0.03, -0.03, 0.05, -0.05, 0.02, -0.04, 0.04};
  const double dth[] = {0.04, 0.04, -0.05, 0.03, -0.02, -0.03, 0.05};
  const double dph[] = {0.1, -0.1, 0.2, -0.2, 0.15, -0.15, 0.05};
  for (int k = 0; k < 7; ++k) {
    SymmetricParams s = init;
    s.r += dr[k];
    s.theta += dth[k];
    if (!fix_phi_zero) s.phi += dph[k];
    seeds.push_back(s);
  }

  std::vector<SearchResult> results(seeds.size());
  parallel_for(0, seeds.size(), [&](std::size_t i) {
    results[i] = pattern_search(seeds[i], fix_phi_zero, tol);
  });

  // Best-of reduction; ties broken by lexicographic parameter order.
  int best = -1;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!std::isfinite(results[i].value)) continue;
    if (best < 0 || results[i].value > results[best].value ||
        (results[i].value == results[best].value &&
         std::array<double, 3>{results[i].params.r, results[i].params.phi,
                               results[i].params.theta} <
             std::array<double, 3>{results[best].params.r, results[best].params.phi,
                                   results[best].params.theta}))
      best = static_cast<int>(i);
  }
  if (best < 0) throw Error(ErrorCode::Infeasible, "maximize_thickness: no linked seed found");

  DesignConfig cfg;
  cfg.params = results[best].params;
  cfg.params.phi = wrap_angle(cfg.params.phi);
  cfg.params.theta = wrap_angle(cfg.params.theta);
  cfg.objective = results[best].value;
  cfg.thickness = cfg.objective * 0.5;
  cfg.circles = symmetric_config(cfg.params);
  cfg.contacts = contact_points(cfg);
  cfg.link = link_report({cfg.circles[0], cfg.circles[1], cfg.circles[2]});
  return cfg;
}

std::vector<TorusCoords> contact_points(const DesignConfig& cfg) {
  TorusSpec torus{cfg.circles[0], cfg.thickness};
  std::vector<TorusCoords> out;
  for (int nb : {1, 2}) {
    DistanceResult d = circle_circle_distance(cfg.circles[0], cfg.circles[nb], 1e-10);
    if (d.multiplicity != 2 || d.degenerate_continuum)
      throw Error(ErrorCode::ContactCount, "contact_points: pair multiplicity is not 2");
    for (const auto& m : d.minimizers) {
      Vec3 pa = cfg.circles[0].point(m.first);
      Vec3 pb = point_circle_distance(pa, cfg.circles[nb]).second;
      out.push_back(torus_coords_of(torus, 0.5 * (pa + pb)));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const TorusCoords& a, const TorusCoords& b) { return a.alpha < b.alpha; });
  return out;
}

}  // namespace tg
