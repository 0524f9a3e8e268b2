#include "triplegear/carve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <vector>

#include "triplegear/error.hpp"
#include "triplegear/kinematics.hpp"
#include "triplegear/parallel.hpp"

namespace tg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double core_distance(const Circle3& c, const Vec3& p) {
  Vec3 d = p - c.center;
  double x = dot(d, c.u_axis), y = dot(d, c.v_axis), z = dot(d, c.normal());
  double ring = std::hypot(x, y);
  return std::hypot(ring - c.radius, z);
}

// Smallest chart-to-world stretch of the alpha direction over a beta band at
// the pitch radius, |d p / d alpha| = |R + radial cos(beta)|; sizes the chart
// dilation that realizes the print gap.
double min_alpha_stretch(double core_radius, double beta0, double halfwidth, double radial) {
  double m = kInf;
  for (int k = 0; k <= 64; ++k) {
    double beta = beta0 - halfwidth + 2 * halfwidth * k / 64.0;
    m = std::min(m, std::abs(core_radius + radial * std::cos(beta)));
  }
  return m;
}

struct ToolCloud {
  std::vector<Vec3> points;     // tool ring rest pose
  std::vector<uint64_t> masks;  // coarse engagement windows, 64 bins per cycle
};

// Skin of the tool field over one gearing band, inflated by the print gap:
// the field resampled on a fine chart grid, dilated in chart and lifted in
// radius, plus radial stacks on faces steeper than the grid step.
void sample_band_skin(const TorusSpec& tool_torus, const HeightField& tool, double longitude,
                      double halfwidth, double pitch_radius, double root, double gap, int n_alpha,
                      std::vector<Vec3>& out) {
  const double da = 2 * M_PI / n_alpha;
  const double ga =
      gap / min_alpha_stretch(tool_torus.core.radius, longitude, halfwidth, pitch_radius);
  const double gb = gap / pitch_radius;
  const double pad = gb + 2 * da;
  const int n_beta = int(std::ceil(2 * (halfwidth + pad) / da)) + 1;
  const double beta_lo = longitude - halfwidth - pad;

  std::vector<double> grid(static_cast<size_t>(n_alpha) * n_beta, -kInf);
  for (int i = 0; i < n_alpha; ++i) {
    double alpha = -M_PI + i * da;
    for (int j = 0; j < n_beta; ++j) {
      double beta = beta_lo + j * da;
      if (std::abs(wrap_angle(beta - longitude)) <= halfwidth)
        grid[size_t(i) * n_beta + j] = tool.sample(alpha, beta);
    }
  }

  // Separable chart dilation by the gap, then a radial lift by the gap.
  const int wa = std::max(1, int(std::ceil(ga / da)));
  const int wb = std::max(1, int(std::ceil(gb / da)));
  std::vector<double> tmp(grid.size(), -kInf);
  for (int i = 0; i < n_alpha; ++i)
    for (int k = -wa; k <= wa; ++k) {
      int s = HeightField::wrap(i + k, n_alpha);
      for (int j = 0; j < n_beta; ++j)
        tmp[size_t(i) * n_beta + j] =
            std::max(tmp[size_t(i) * n_beta + j], grid[size_t(s) * n_beta + j]);
    }
  for (int i = 0; i < n_alpha; ++i)
    for (int j = 0; j < n_beta; ++j) {
      double m = -kInf;
      for (int k = std::max(0, j - wb); k <= std::min(n_beta - 1, j + wb); ++k)
        m = std::max(m, tmp[size_t(i) * n_beta + k]);
      grid[size_t(i) * n_beta + j] = m > -kInf ? m + gap : -kInf;
    }

  auto emit = [&](double alpha, double beta, double radial) {
    out.push_back(tube_point(tool_torus, alpha, beta, radial));
  };
  const double step = da;
  const double face_floor = root - gap - 0.02;
  for (int i = 0; i < n_alpha; ++i) {
    double alpha = -M_PI + i * da;
    for (int j = 0; j < n_beta; ++j) {
      double h = grid[size_t(i) * n_beta + j];
      if (h == -kInf) continue;
      double beta = beta_lo + j * da;
      emit(alpha, beta, h);
      // Faces toward the +alpha and +beta neighbors.
      const double nb[2] = {grid[size_t(HeightField::wrap(i + 1, n_alpha)) * n_beta + j],
                            j + 1 < n_beta ? grid[size_t(i) * n_beta + j + 1] : -kInf};
      const double mid_a[2] = {alpha + 0.5 * da, alpha};
      const double mid_b[2] = {beta, beta + 0.5 * da};
      for (int f = 0; f < 2; ++f) {
        double lo, hi;
        if (nb[f] == -kInf) {
          lo = face_floor;
          hi = h - step;
        } else {
          lo = std::min(h, nb[f]) + step;
          hi = std::max(h, nb[f]) - step;
          if (hi - lo < step) continue;
        }
        for (double r = lo; r <= hi; r += step) emit(mid_a[f], mid_b[f], r);
      }
    }
  }
}

// Keeps only samples whose orbit in the target frame can reach target
// material, and records which coarse phase bins bring them within reach.
ToolCloud prune_cloud(std::vector<Vec3> points, const DesignConfig& cfg, int target, int tool,
                      double omega, double reach) {
  const double period = 2 * M_PI / std::abs(omega);
  const Circle3& core = cfg.circles[size_t(target)];
  std::vector<uint64_t> masks(points.size(), 0);
  for (int k = 0; k < 64; ++k) {
    RigidMotion rel = relative_motion(cfg, target, tool, omega, k * period / 64);
    for (size_t s = 0; s < points.size(); ++s)
      if (core_distance(core, rel(points[s])) < reach) masks[s] |= uint64_t(1) << k;
  }
  ToolCloud cloud;
  for (size_t s = 0; s < points.size(); ++s) {
    if (!masks[s]) continue;
    uint64_t m = masks[s];
    uint64_t spread = m | (m << 1) | (m >> 63) | (m >> 1) | (m << 63);
    cloud.points.push_back(points[s]);
    cloud.masks.push_back(spread);
  }
  return cloud;
}

// Lower envelope of the tool's gearing bands swept through the relative
// motion, binned into the target chart grid; cells the tool never visits
// stay +inf.
void envelope_pass(const DesignConfig& cfg, const GearDesign& d, int target, int tool_ring,
                   const HeightField& tool, const std::vector<std::pair<double, double>>& bands,
                   int steps, HeightField& m) {
  const double rho = cfg.thickness;
  const double omega = 1.0;
  const double period = 2 * M_PI;
  const TorusSpec target_torus{cfg.circles[size_t(target)], rho};
  const TorusSpec tool_torus{cfg.circles[size_t(tool_ring)], rho};
  const double root = rho * (1 - d.dedendum_fraction);
  const double tip = rho * (1 + d.addendum_fraction);

  // Each side is inflated by a quarter of the clearance gap; the mutual carve
  // plus conjugate rounding then keeps the pair's total backlash inside the
  // full gap while never closing to zero.
  std::vector<Vec3> raw;
  for (const auto& [longitude, halfwidth] : bands)
    sample_band_skin(tool_torus, tool, longitude, halfwidth, rho, root, 0.25 * d.clearance_gap,
                     d.tool_alpha, raw);
  ToolCloud cloud = prune_cloud(std::move(raw), cfg, target, tool_ring, omega, tip + 0.12);
  if (cloud.points.empty()) return;

  const int chunks = std::min<int>(std::max(1u, std::thread::hardware_concurrency()), 8);
  std::vector<HeightField> locals(static_cast<size_t>(chunks), HeightField(m.na, m.nb, kInf));
  parallel_for(0, size_t(chunks), [&](size_t c) {
    HeightField& local = locals[c];
    for (int s = int(c); s < steps; s += chunks) {
      double t = s * period / steps;
      RigidMotion rel = relative_motion(cfg, target, tool_ring, omega, t);
      int coarse = int(uint64_t(s) * 64 / uint64_t(steps));
      for (size_t k = 0; k < cloud.points.size(); ++k) {
        if (!(cloud.masks[k] >> coarse & 1)) continue;
        TubeCoords tc = tube_coords_of(target_torus, rel(cloud.points[k]));
        double& cell = local.at(local.alpha_index(tc.alpha), local.beta_index(tc.beta));
        if (tc.radial < cell) cell = tc.radial;
      }
    }
  });
  for (const HeightField& local : locals)
    for (size_t i = 0; i < m.h.size(); ++i) m.h[i] = std::min(m.h[i], local.h[i]);
}

// Phase of a plateau pattern with the row's pitch periodicity: circular mean
// of order N over the plateau centers.
double plateau_phase(const HeightField& m, int j_center, int tooth_count, double threshold,
                     const char* stage) {
  const int na = m.na;
  std::vector<char> plateau(static_cast<size_t>(na));
  int total = 0;
  for (int i = 0; i < na; ++i) {
    double f = kInf;
    for (int j = j_center - 1; j <= j_center + 1; ++j) f = std::min(f, m.at(i, j));
    plateau[size_t(i)] = f > threshold;
    total += plateau[size_t(i)];
  }
  if (total == 0 || total == na)
    throw Error(ErrorCode::Infeasible,
                std::string(stage) + ": no tooth plateaus found in the swept band");
  double sx = 0, sy = 0;
  int runs = 0;
  int i0 = 0;
  while (plateau[size_t(i0)]) ++i0;  // start in a groove; total < na guarantees one
  for (int k = 0; k < na;) {
    int i = (i0 + k) % na;
    if (!plateau[size_t(i)]) {
      ++k;
      continue;
    }
    int len = 0;
    while (k + len < na && plateau[size_t((i0 + k + len) % na)]) ++len;
    double center = m.alpha(i0 + k) + M_PI * double(len - 1) / na;  // half step per cell
    sx += std::cos(tooth_count * center);
    sy += std::sin(tooth_count * center);
    ++runs;
    k += len;
  }
  if (runs != tooth_count)
    throw Error(ErrorCode::Infeasible, std::string(stage) + ": found " + std::to_string(runs) +
                                           " plateaus, expected " + std::to_string(tooth_count));
  return std::atan2(sy, sx) / tooth_count;
}

double outer_longitude_of(const DesignConfig& cfg) {
  double sum = 0;
  int count = 0;
  for (const TorusCoords& c : cfg.contacts)
    if (std::abs(wrap_angle(c.beta - M_PI)) > 1.0) {
      sum += std::abs(c.beta);
      ++count;
    }
  if (count == 0)
    throw Error(ErrorCode::InvalidInput, "config has no outer contacts; run the optimizer first");
  return sum / count;
}

ToothRowSpec base_row(const GearDesign& d, double rho) {
  ToothRowSpec row;
  row.tooth_count = d.tooth_count;
  row.addendum = d.addendum_fraction * rho;
  row.dedendum = d.dedendum_fraction * rho;
  row.top_land_fraction = d.top_land_fraction;
  row.fill = d.fill;
  return row;
}

}  // namespace

double row_height(const ToothRowSpec& row, double alpha, double beta, double pitch_radius,
                  double fallback) {
  double v = wrap_angle(beta - row.longitude);
  if (std::abs(v) > row.band_halfwidth) return fallback;
  double u = std::remainder(alpha - row.phase - row.flank_slope * v, row.pitch());
  double du = 0.5 * row.fill * row.pitch() - std::abs(u);
  double dv = row.band_halfwidth - std::abs(v);
  double h = pitch_radius + std::min(du, dv) / row.draft();
  return std::clamp(h, pitch_radius - row.dedendum, pitch_radius + row.addendum);
}

namespace {

// Inner band only: teeth on a dedendum floor, plain tube elsewhere.
HeightField rasterize_inner(const GearDesign& d, const ToothRowSpec& inner, double rho) {
  HeightField f(d.field_alpha, d.field_beta, rho);
  for (int i = 0; i < f.na; ++i)
    for (int j = 0; j < f.nb; ++j)
      f.at(i, j) = row_height(inner, f.alpha(i), f.beta(j), rho, rho);
  return f;
}

}  // namespace

GearRows detect_rows(const DesignConfig& cfg, const GearDesign& d) {
  const double rho = cfg.thickness;
  if (!(rho > 0)) throw Error(ErrorCode::InvalidInput, "config has no thickness");
  const double outer_b = outer_longitude_of(cfg);

  GearRows rows;
  rows.inner = base_row(d, rho);
  rows.inner.longitude = M_PI;
  rows.inner.flank_slope = d.inner_flank_slope;
  rows.inner.band_halfwidth = d.inner_band_halfwidth;
  rows.inner.phase = 0;

  // Each neighbor's inner row grinds one outer band; the uncarved plateaus
  // are where this gear's outer teeth must stand.
  HeightField inner_field = rasterize_inner(d, rows.inner, rho);
  const std::vector<std::pair<double, double>> inner_band = {
      {rows.inner.longitude, rows.inner.band_halfwidth}};
  const double threshold = rho - 0.25 * rows.inner.dedendum;
  bool have_neg = false, have_pos = false;
  for (int tool : {1, 2}) {
    HeightField m(d.field_alpha, d.field_beta, kInf);
    envelope_pass(cfg, d, 0, tool, inner_field, inner_band, d.detect_steps, m);
    double best = kInf;
    double band = 0;
    for (double b0 : {-outer_b, outer_b}) {
      double lo = kInf;
      for (int i = 0; i < m.na; ++i)
        for (int j = m.beta_index(b0) - 3; j <= m.beta_index(b0) + 3; ++j)
          lo = std::min(lo, m.at(i, j));
      if (lo < best) {
        best = lo;
        band = b0;
      }
    }
    if (best > threshold)
      throw Error(ErrorCode::Infeasible, "row detection: neighbor sweep leaves no groove");
    ToothRowSpec outer = base_row(d, rho);
    outer.longitude = band;
    outer.band_halfwidth = d.outer_band_halfwidth;
    double phase0 = 0, slope = 0;
    double prev = 0;
    for (int k = -1; k <= 1; ++k) {
      double voff = 0.1 * k;
      double phi = plateau_phase(m, m.beta_index(band + voff), d.tooth_count, threshold,
                                 "row detection");
      if (k == 0) phase0 = phi;
      if (k >= 0) slope += std::remainder(phi - prev, outer.pitch());
      prev = phi;
    }
    outer.flank_slope = slope / 0.2;
    outer.phase = phase0;
    if (band < 0) {
      if (have_neg) throw Error(ErrorCode::Infeasible, "row detection: both neighbors hit one band");
      rows.outer_neg = outer;
      have_neg = true;
    } else {
      if (have_pos) throw Error(ErrorCode::Infeasible, "row detection: both neighbors hit one band");
      rows.outer_pos = outer;
      have_pos = true;
    }
  }
  if (!(have_neg && have_pos))
    throw Error(ErrorCode::Infeasible, "row detection: a gearing band was never carved");
  return rows;
}

HeightField seed_field(const DesignConfig& cfg, const GearDesign& d, const GearRows& rows) {
  const double rho = cfg.thickness;
  HeightField f(d.field_alpha, d.field_beta, rho);
  for (int i = 0; i < f.na; ++i) {
    double alpha = f.alpha(i);
    for (int j = 0; j < f.nb; ++j) {
      double beta = f.beta(j);
      for (const ToothRowSpec* row : {&rows.inner, &rows.outer_neg, &rows.outer_pos}) {
        double h = row_height(*row, alpha, beta, rho, -1);
        if (h >= 0) {
          f.at(i, j) = h;
          break;
        }
      }
    }
  }
  return f;
}

// Both neighbors' toothed seeds sweep through the relative motion and grind
// this gear in one pass. Carving only removes tool material, so the finished
// surfaces still clear each other by at least the per-side inflation; no
// iteration is needed.
HeightField carve_field(const DesignConfig& cfg, const GearDesign& d, const GearRows& rows,
                        const HeightField& seed) {
  const std::vector<std::pair<double, double>> bands = {
      {rows.inner.longitude, rows.inner.band_halfwidth},
      {rows.outer_neg.longitude, rows.outer_neg.band_halfwidth},
      {rows.outer_pos.longitude, rows.outer_pos.band_halfwidth}};
  HeightField m(seed.na, seed.nb, kInf);
  envelope_pass(cfg, d, 0, 1, seed, bands, d.sweep_steps, m);
  envelope_pass(cfg, d, 0, 2, seed, bands, d.sweep_steps, m);
  HeightField field = seed;
  for (size_t i = 0; i < field.h.size(); ++i) field.h[i] = std::min(seed.h[i], m.h[i]);
  return field;
}

TriMesh field_mesh(const TorusSpec& torus, const HeightField& field) {
  TriMesh mesh;
  mesh.vertices.reserve(static_cast<size_t>(field.na) * field.nb);
  for (int i = 0; i < field.na; ++i)
    for (int j = 0; j < field.nb; ++j)
      mesh.vertices.push_back(tube_point(torus, field.alpha(i), field.beta(j), field.at(i, j)));
  auto id = [&](int i, int j) {
    return uint32_t(static_cast<size_t>(HeightField::wrap(i, field.na)) * field.nb +
                    HeightField::wrap(j, field.nb));
  };
  mesh.triangles.reserve(static_cast<size_t>(field.na) * field.nb * 2);
  for (int i = 0; i < field.na; ++i)
    for (int j = 0; j < field.nb; ++j) {
      mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  if (mesh.signed_volume() < 0)
    for (auto& t : mesh.triangles) std::swap(t[1], t[2]);
  return mesh;
}

TriMesh place_on_ring(const TriMesh& master, int ring) {
  RigidMotion rot = rotation_about_axis({0, 0, 0}, {0, 0, 1}, 2 * M_PI / 3 * (ring % 3));
  TriMesh out = master;
  for (Vec3& v : out.vertices) v = rot(v);
  return out;
}

TriMesh torus_shell_mesh(const Circle3& core, double tube_radius, int na, int nb) {
  if (!(tube_radius > 0)) throw Error(ErrorCode::InvalidInput, "torus shell needs a positive radius");
  return field_mesh(TorusSpec{core, tube_radius}, HeightField(na, nb, tube_radius));
}

GearSolid assemble_gear(const DesignConfig& cfg, const GearDesign& d, bool hollow) {
  GearSolid g;
  g.torus = TorusSpec{cfg.circles[0], cfg.thickness};
  g.rows = detect_rows(cfg, d);
  HeightField seed = seed_field(cfg, d, g.rows);
  g.field = carve_field(cfg, d, g.rows, seed);
  g.mesh = field_mesh(g.torus, g.field);
  g.hollow = hollow;
  if (hollow) {
    HeightField inner = g.field;
    for (double& h : inner.h) h -= d.hollow_fraction * cfg.thickness;
    TriMesh shell = field_mesh(g.torus, inner);
    for (auto& t : shell.triangles) std::swap(t[1], t[2]);
    uint32_t offset = uint32_t(g.mesh.vertices.size());
    g.mesh.vertices.insert(g.mesh.vertices.end(), shell.vertices.begin(), shell.vertices.end());
    for (auto t : shell.triangles)
      g.mesh.triangles.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "teeth=%d addendum=%.9g dedendum=%.9g gap=%.9g grid=%dx%d sweep=%d r=%.9g "
                "theta=%.9g thickness=%.9g",
                d.tooth_count, d.addendum_fraction * cfg.thickness,
                d.dedendum_fraction * cfg.thickness, d.clearance_gap, d.field_alpha, d.field_beta,
                d.sweep_steps, cfg.params.r, cfg.params.theta, cfg.thickness);
  g.provenance = buf;
  MeshReport report = validate(g.mesh);
  if (!report.watertight)
    throw Error(ErrorCode::NonWatertight,
                "assembled gear mesh is not watertight (boundary edges: " +
                    std::to_string(report.boundary_edge_count) + ")");
  return g;
}

// ---- flank tracing ----

namespace {

// Least-squares C1 piecewise cubic Hermite fit on uniform knots; returns the
// node values and slopes for one channel.
void fit_hermite(const std::vector<double>& t, const std::vector<double>& y, double t0, double t1,
                 int knot_count, std::vector<double>& value, std::vector<double>& slope) {
  const int n = 2 * knot_count;
  const double h = (t1 - t0) / (knot_count - 1);
  std::vector<double> a(static_cast<size_t>(n) * n, 0.0), rhs(static_cast<size_t>(n), 0.0);
  for (size_t s = 0; s < t.size(); ++s) {
    int seg = std::clamp(int((t[s] - t0) / h), 0, knot_count - 2);
    double u = (t[s] - (t0 + seg * h)) / h;
    double b[4] = {2 * u * u * u - 3 * u * u + 1, h * (u * u * u - 2 * u * u + u),
                   -2 * u * u * u + 3 * u * u, h * (u * u * u - u * u)};
    int idx[4] = {2 * seg, 2 * seg + 1, 2 * seg + 2, 2 * seg + 3};
    for (int p = 0; p < 4; ++p) {
      rhs[size_t(idx[p])] += b[p] * y[s];
      for (int q = 0; q < 4; ++q) a[size_t(idx[p]) * n + idx[q]] += b[p] * b[q];
    }
  }
  double lambda = 0;
  for (int i = 0; i < n; ++i) lambda = std::max(lambda, a[size_t(i) * n + i]);
  lambda = lambda * 1e-12 + 1e-300;
  for (int i = 0; i < n; ++i) a[size_t(i) * n + i] += lambda;
  // Cholesky solve.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = a[size_t(i) * n + j];
      for (int k = 0; k < j; ++k) sum -= a[size_t(i) * n + k] * a[size_t(j) * n + k];
      a[size_t(i) * n + j] = i == j ? std::sqrt(std::max(sum, 1e-300)) : sum / a[size_t(j) * n + j];
    }
  }
  for (int i = 0; i < n; ++i) {
    double sum = rhs[size_t(i)];
    for (int k = 0; k < i; ++k) sum -= a[size_t(i) * n + k] * rhs[size_t(k)];
    rhs[size_t(i)] = sum / a[size_t(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double sum = rhs[size_t(i)];
    for (int k = i + 1; k < n; ++k) sum -= a[size_t(k) * n + i] * rhs[size_t(k)];
    rhs[size_t(i)] = sum / a[size_t(i) * n + i];
  }
  value.resize(static_cast<size_t>(knot_count));
  slope.resize(static_cast<size_t>(knot_count));
  for (int k = 0; k < knot_count; ++k) {
    value[size_t(k)] = rhs[size_t(2 * k)];
    slope[size_t(k)] = rhs[size_t(2 * k + 1)];
  }
}

double eval_hermite(const std::vector<double>& knots, const std::vector<double>& value,
                    const std::vector<double>& slope, double t) {
  const int kc = int(knots.size());
  double tc = std::clamp(t, knots.front(), knots.back());
  int seg = std::clamp(int((tc - knots.front()) / (knots[1] - knots[0])), 0, kc - 2);
  double h = knots[size_t(seg) + 1] - knots[size_t(seg)];
  double u = (tc - knots[size_t(seg)]) / h;
  return (2 * u * u * u - 3 * u * u + 1) * value[size_t(seg)] +
         h * (u * u * u - 2 * u * u + u) * slope[size_t(seg)] +
         (-2 * u * u * u + 3 * u * u) * value[size_t(seg) + 1] +
         h * (u * u * u - u * u) * slope[size_t(seg) + 1];
}

}  // namespace

TubeCoords FlankCurve::eval(double t) const {
  TubeCoords c;
  c.alpha = wrap_angle(eval_hermite(knots, node_value[0], node_slope[0], t));
  c.beta = wrap_angle(eval_hermite(knots, node_value[1], node_slope[1], t));
  c.radial = eval_hermite(knots, node_value[2], node_slope[2], t);
  return c;
}

FlankCurve carve_flank(const std::vector<Vec3>& curve, const DesignConfig& cfg, int driver,
                       int target, double omega, int steps) {
  if (steps < 180) throw Error(ErrorCode::InvalidInput, "carve_flank needs at least 180 steps");
  if (curve.size() < 3) throw Error(ErrorCode::InvalidInput, "carve_flank needs a closed curve");
  if (driver < 0 || driver > 2 || target < 0 || target > 2 || driver == target)
    throw Error(ErrorCode::InvalidInput, "carve_flank needs two distinct ring indices");
  if (omega == 0) throw Error(ErrorCode::InvalidInput, "carve_flank needs a nonzero speed");
  const double rho = cfg.thickness;
  const Circle3& core = cfg.circles[size_t(target)];
  const TorusSpec target_torus{core, rho};
  const double period = 2 * M_PI / std::abs(omega);

  // Dense closed chain over the input polyline.
  std::vector<Vec3> dense;
  double total = 0;
  for (size_t i = 0; i < curve.size(); ++i) total += dist(curve[i], curve[(i + 1) % curve.size()]);
  double chord = std::max(total / 2048, 1e-6);
  for (size_t i = 0; i < curve.size(); ++i) {
    const Vec3& a = curve[i];
    const Vec3& b = curve[(i + 1) % curve.size()];
    int pieces = std::max(1, int(std::ceil(dist(a, b) / chord)));
    for (int k = 0; k < pieces; ++k) dense.push_back(a + (b - a) * (double(k) / pieces));
  }
  const size_t nd = dense.size();

  std::vector<char> engaged(static_cast<size_t>(steps), 0);
  std::vector<Vec3> closest(static_cast<size_t>(steps));
  std::vector<double> depth(static_cast<size_t>(steps), kInf);
  for (int s = 0; s < steps; ++s) {
    RigidMotion rel = relative_motion(cfg, target, driver, omega, s * period / steps);
    size_t best = 0;
    double dmin = kInf;
    std::vector<double> dv(nd);
    for (size_t i = 0; i < nd; ++i) {
      dv[i] = core_distance(core, rel(dense[i]));
      if (dv[i] < dmin) {
        dmin = dv[i];
        best = i;
      }
    }
    if (dmin > rho) continue;
    double tie = dmin + 1e-9 * (1 + dmin);
    for (size_t i = 0; i < nd; ++i) {
      size_t gap_idx = std::min((i + nd - best) % nd, (best + nd - i) % nd);
      if (dv[i] <= tie && gap_idx > nd / 20 &&
          dist(rel(dense[i]), rel(dense[best])) > 0.02)
        throw Error(ErrorCode::Ambiguity,
                    "carve_flank: two closest points on the swept curve at step " +
                        std::to_string(s));
    }
    // Golden-section polish over the two segments around the best vertex.
    Vec3 pa = rel(dense[(best + nd - 1) % nd]);
    Vec3 pb = rel(dense[best]);
    Vec3 pc = rel(dense[(best + 1) % nd]);
    auto at = [&](double u) { return u < 1 ? pa + (pb - pa) * u : pb + (pc - pb) * (u - 1); };
    double lo = 0, hi = 2;
    const double gr = 0.5 * (std::sqrt(5.0) - 1);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = core_distance(core, at(x1)), f2 = core_distance(core, at(x2));
    for (int it = 0; it < 60; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = core_distance(core, at(x1));
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = core_distance(core, at(x2));
      }
    }
    engaged[size_t(s)] = 1;
    closest[size_t(s)] = at(0.5 * (lo + hi));
    depth[size_t(s)] = core_distance(core, closest[size_t(s)]);
  }

  int deepest = int(std::min_element(depth.begin(), depth.end()) - depth.begin());
  if (!engaged[size_t(deepest)])
    throw Error(ErrorCode::NoContact, "carve_flank: the curve never engages the target ring");
  int left = deepest, right = deepest;
  while (engaged[size_t((left - 1 + steps) % steps)] && right - left + 1 < steps) --left;
  while (engaged[size_t((right + 1) % steps)] && right - left + 1 < steps) ++right;
  const int count = right - left + 1;
  if (count < 8) throw Error(ErrorCode::FitFailure, "carve_flank: engaged arc too short to fit");

  FlankCurve flank;
  std::vector<double> ca(static_cast<size_t>(count)), cb(static_cast<size_t>(count)), cr(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) {
    int s = ((left + k) % steps + steps) % steps;
    double t = (left + k) * period / steps;
    flank.times.push_back(t);
    flank.samples.push_back(closest[size_t(s)]);
    TubeCoords tc = tube_coords_of(target_torus, closest[size_t(s)]);
    flank.chart_samples.push_back(tc);
    ca[size_t(k)] = tc.alpha;
    cb[size_t(k)] = tc.beta;
    cr[size_t(k)] = tc.radial;
    if (k > 0) {
      ca[size_t(k)] = ca[size_t(k) - 1] + std::remainder(ca[size_t(k)] - ca[size_t(k) - 1], 2 * M_PI);
      cb[size_t(k)] = cb[size_t(k) - 1] + std::remainder(cb[size_t(k)] - cb[size_t(k) - 1], 2 * M_PI);
    }
  }

  const double t0 = flank.times.front(), t1 = flank.times.back();
  const std::vector<double>* channels[3] = {&ca, &cb, &cr};
  for (int kc = 6;; kc *= 2) {
    flank.knots.resize(static_cast<size_t>(kc));
    for (int k = 0; k < kc; ++k) flank.knots[size_t(k)] = t0 + (t1 - t0) * k / (kc - 1);
    for (int c = 0; c < 3; ++c)
      fit_hermite(flank.times, *channels[c], t0, t1, kc, flank.node_value[size_t(c)],
                  flank.node_slope[size_t(c)]);
    flank.fit_residual = 0;
    for (int k = 0; k < count; ++k) {
      double a = eval_hermite(flank.knots, flank.node_value[0], flank.node_slope[0],
                              flank.times[size_t(k)]);
      double b = eval_hermite(flank.knots, flank.node_value[1], flank.node_slope[1],
                              flank.times[size_t(k)]);
      double r = eval_hermite(flank.knots, flank.node_value[2], flank.node_slope[2],
                              flank.times[size_t(k)]);
      flank.fit_residual = std::max(
          flank.fit_residual, dist(tube_point(target_torus, a, b, r), flank.samples[size_t(k)]));
    }
    if (flank.fit_residual <= 1e-7 || 2 * kc >= count || kc >= 64) break;
  }
  if (flank.fit_residual > 1e-4)
    throw Error(ErrorCode::FitFailure, "carve_flank: fit residual above tolerance");
  return flank;
}

GearPatches flank_surface(const std::vector<FlankCurve>& flanks, const TorusSpec& torus,
                          double pitch_radius) {
  if (flanks.size() < 2)
    throw Error(ErrorCode::InvalidInput, "flank_surface needs at least two flank curves");
  const int cols = 65;
  const int rows = int(flanks.size());
  std::vector<std::vector<TubeCoords>> chart(static_cast<size_t>(rows));
  double base_mean = 0;
  for (int r = 0; r < rows; ++r) {
    const FlankCurve& f = flanks[size_t(r)];
    double mean = 0;
    std::vector<TubeCoords> row(static_cast<size_t>(cols));
    double prev = 0;
    for (int c = 0; c < cols; ++c) {
      double t = f.knots.front() + (f.knots.back() - f.knots.front()) * c / (cols - 1);
      TubeCoords tc = f.eval(t);
      if (c > 0) tc.alpha = prev + std::remainder(tc.alpha - prev, 2 * M_PI);
      prev = tc.alpha;
      mean += tc.alpha / cols;
      row[size_t(c)] = tc;
    }
    if (r == 0)
      base_mean = mean;
    else {
      double shift = 2 * M_PI * std::round((base_mean - mean) / (2 * M_PI));
      for (auto& tc : row) tc.alpha += shift;
    }
    chart[size_t(r)] = std::move(row);
  }
  // Consecutive curves must not cross in the chart.
  auto orient = [](const TubeCoords& a, const TubeCoords& b, const TubeCoords& c) {
    double v = (b.alpha - a.alpha) * (c.beta - a.beta) - (b.beta - a.beta) * (c.alpha - a.alpha);
    return v > 0 ? 1 : v < 0 ? -1 : 0;
  };
  for (int r = 0; r + 1 < rows; ++r)
    for (int i = 0; i + 1 < cols; ++i)
      for (int j = 0; j + 1 < cols; ++j) {
        const TubeCoords &a = chart[size_t(r)][size_t(i)], &b = chart[size_t(r)][size_t(i) + 1];
        const TubeCoords &c = chart[size_t(r) + 1][size_t(j)], &d = chart[size_t(r) + 1][size_t(j) + 1];
        if (orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0)
          throw Error(ErrorCode::DegenerateTooth, "flank_surface: flank curves cross in the chart");
      }

  GearPatches patches;
  patches.torus = torus;
  patches.pitch_radius = pitch_radius;
  patches.rows = rows;
  patches.cols = cols;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const TubeCoords& tc = chart[size_t(r)][size_t(c)];
      patches.mesh.vertices.push_back(tube_point(torus, tc.alpha, tc.beta, tc.radial));
    }
  auto id = [&](int r, int c) { return uint32_t(r * cols + c); };
  for (int r = 0; r + 1 < rows; ++r)
    for (int c = 0; c + 1 < cols; ++c) {
      patches.mesh.triangles.push_back({id(r, c), id(r + 1, c), id(r + 1, c + 1)});
      patches.mesh.triangles.push_back({id(r, c), id(r + 1, c + 1), id(r, c + 1)});
    }
  // Orient out of the tooth: positive mean radial component of the normals.
  double mean = 0;
  for (size_t t = 0; t < patches.mesh.triangles.size(); ++t) {
    const auto& tri = patches.mesh.triangles[t];
    Vec3 c = (patches.mesh.vertices[tri[0]] + patches.mesh.vertices[tri[1]] +
              patches.mesh.vertices[tri[2]]) /
             3.0;
    TubeCoords tc = tube_coords_of(torus, c);
    Vec3 radial_dir = normalized(c - tube_point(torus, tc.alpha, tc.beta, 0));
    mean += dot(patches.mesh.triangle_normal(t), radial_dir);
  }
  if (mean < 0)
    for (auto& t : patches.mesh.triangles) std::swap(t[1], t[2]);
  return patches;
}

GearPatches truncate_top_land(const GearPatches& patches, const ToothRowSpec& spec, double land) {
  if (!(land > 0 && land < 0.5))
    throw Error(ErrorCode::InvalidInput, "top land fraction must be in (0, 0.5)");
  if (land >= spec.fill)
    throw Error(ErrorCode::InvalidInput, "top land fraction leaves no tooth material");
  const double cut = patches.pitch_radius + (spec.fill - land) * spec.pitch() * 0.5 / spec.draft();
  GearPatches out = patches;
  for (Vec3& v : out.mesh.vertices) {
    TubeCoords tc = tube_coords_of(patches.torus, v);
    if (tc.radial > cut) v = tube_point(patches.torus, tc.alpha, tc.beta, cut);
  }
  return out;
}

}  // namespace tg
