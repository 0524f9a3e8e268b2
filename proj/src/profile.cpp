#include "triplegear/profile.hpp"

#include <algorithm>
#include <cmath>

#include "triplegear/error.hpp"

namespace tg {
namespace {

void check_spec(const ToothRowSpec& s) {
  if (s.tooth_count < 3) throw Error(ErrorCode::InvalidProfile, "tooth_count must be >= 3");
  if (s.addendum <= 0 || s.dedendum <= 0)
    throw Error(ErrorCode::InvalidProfile, "addendum and dedendum must be positive");
  if (s.top_land_fraction <= 0 || s.top_land_fraction >= 0.5)
    throw Error(ErrorCode::InvalidProfile, "top_land_fraction must be in (0, 0.5)");
  if (s.fill <= s.top_land_fraction || s.fill >= 1.0)
    throw Error(ErrorCode::InvalidProfile, "fill must be in (top_land_fraction, 1)");
  if (s.band_halfwidth <= 0) throw Error(ErrorCode::InvalidProfile, "band_halfwidth must be positive");
  // Shear shifts all teeth of a row equally per beta, so only the fill decides
  // whether adjacent teeth touch; fill < 1 is enforced above. Below the pitch
  // surface the footprint widens by draft; the root flat must stay positive.
  const double root_width = s.fill * s.pitch() + 2 * s.draft() * s.dedendum;
  if (root_width >= s.pitch())
    throw Error(ErrorCode::InvalidProfile, "teeth overlap: root footprint exceeds the pitch");
}

}  // namespace

ChartPattern profile_at_radius(const ToothRowSpec& spec, bool merged_inner, double pitch_radius,
                               double radius) {
  check_spec(spec);
  const double beta0 = merged_inner ? M_PI : spec.longitude;
  const double shrink = spec.draft() * (radius - pitch_radius);
  const double half_u = spec.fill * spec.pitch() * 0.5 - shrink;
  const double half_v = spec.band_halfwidth - shrink;
  if (half_u <= 0 || half_v <= 0)
    throw Error(ErrorCode::InvalidProfile, "footprint vanishes at the requested radius");

  ChartPattern pattern;
  pattern.loops.reserve(static_cast<std::size_t>(spec.tooth_count));
  for (int k = 0; k < spec.tooth_count; ++k) {
    const double center = spec.phase + k * spec.pitch();
    // Corners counterclockwise in (u, v); alpha = center + u + slope*v.
    const double us[4] = {-half_u, half_u, half_u, -half_u};
    const double vs[4] = {-half_v, -half_v, half_v, half_v};
    std::vector<ChartPoint> loop;
    loop.reserve(4);
    for (int c = 0; c < 4; ++c)
      loop.push_back({center + us[c] + spec.flank_slope * vs[c], beta0 + vs[c]});
    pattern.loops.push_back(std::move(loop));
  }
  return pattern;
}

ChartPattern master_tooth_profile(const ToothRowSpec& spec, bool merged_inner) {
  return profile_at_radius(spec, merged_inner, 0, 0);  // pitch level: zero shrink
}

double polygon_signed_area(const std::vector<ChartPoint>& loop) {
  double acc = 0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const ChartPoint& a = loop[i];
    const ChartPoint& b = loop[(i + 1) % n];
    acc += a.alpha * b.beta - b.alpha * a.beta;
  }
  return 0.5 * acc;
}

ChartPattern offset_profile(const ChartPattern& pattern, double gap) {
  if (gap < 0) throw Error(ErrorCode::InvalidInput, "offset gap must be >= 0");
  if (gap == 0) return pattern;
  ChartPattern out;
  out.loops.reserve(pattern.loops.size());
  for (const auto& loop : pattern.loops) {
    const std::size_t n = loop.size();
    if (n < 3) throw Error(ErrorCode::InvalidInput, "offset of a degenerate loop");
    const double orient = polygon_signed_area(loop) >= 0 ? 1.0 : -1.0;
    std::vector<ChartPoint> res;
    for (std::size_t i = 0; i < n; ++i) {
      const ChartPoint& prev = loop[(i + n - 1) % n];
      const ChartPoint& cur = loop[i];
      const ChartPoint& next = loop[(i + 1) % n];
      const auto edge_normal = [orient](const ChartPoint& a, const ChartPoint& b) {
        const double dx = b.alpha - a.alpha, dy = b.beta - a.beta;
        const double len = std::hypot(dx, dy);
        // Outward normal of a counterclockwise edge points to its right.
        return ChartPoint{orient * dy / len, -orient * dx / len};
      };
      const ChartPoint n_in = edge_normal(prev, cur);
      const ChartPoint n_out = edge_normal(cur, next);
      const double cross_z = n_in.alpha * n_out.beta - n_in.beta * n_out.alpha;
      const double turn = std::atan2(cross_z, n_in.alpha * n_out.alpha + n_in.beta * n_out.beta);
      if (turn >= -1e-12) {
        // Convex corner: join the two offset edges with an arc about the vertex.
        const double a0 = std::atan2(n_in.beta, n_in.alpha);
        const int arcs = std::max(1, static_cast<int>(std::ceil(std::abs(turn) / 0.2)));
        for (int s = 0; s <= arcs; ++s) {
          const double a = a0 + turn * s / arcs;
          res.push_back({cur.alpha + gap * std::cos(a), cur.beta + gap * std::sin(a)});
        }
      } else {
        // Reflex corner: intersection of the two offset edge lines.
        const double denom = 1 + n_in.alpha * n_out.alpha + n_in.beta * n_out.beta;
        if (denom < 1e-9) throw Error(ErrorCode::OffsetTooLarge, "offset folds at a reflex corner");
        res.push_back({cur.alpha + gap * (n_in.alpha + n_out.alpha) / denom,
                       cur.beta + gap * (n_in.beta + n_out.beta) / denom});
      }
    }
    out.loops.push_back(std::move(res));
  }
  if (pattern_self_intersects(out))
    throw Error(ErrorCode::OffsetTooLarge, "offset profile self-intersects");
  return out;
}

namespace {

bool segments_properly_intersect(const ChartPoint& a, const ChartPoint& b, const ChartPoint& c,
                                 const ChartPoint& d) {
  const auto orient2 = [](const ChartPoint& p, const ChartPoint& q, const ChartPoint& r) {
    return (q.alpha - p.alpha) * (r.beta - p.beta) - (q.beta - p.beta) * (r.alpha - p.alpha);
  };
  const double o1 = orient2(a, b, c), o2 = orient2(a, b, d);
  const double o3 = orient2(c, d, a), o4 = orient2(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 &&
         o4 != 0;
}

}  // namespace

bool pattern_self_intersects(const ChartPattern& pattern) {
  // Flatten with loop ids; skip adjacent segments within a loop.
  struct Seg {
    ChartPoint a, b;
    std::size_t loop;
    std::size_t idx;
  };
  std::vector<Seg> segs;
  for (std::size_t l = 0; l < pattern.loops.size(); ++l) {
    const auto& loop = pattern.loops[l];
    for (std::size_t i = 0; i < loop.size(); ++i)
      segs.push_back({loop[i], loop[(i + 1) % loop.size()], l, i});
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      if (segs[i].loop == segs[j].loop) {
        const std::size_t n = pattern.loops[segs[i].loop].size();
        const std::size_t d = (segs[j].idx - segs[i].idx + n) % n;
        if (d == 1 || d == n - 1) continue;  // shared endpoint
      }
      if (segments_properly_intersect(segs[i].a, segs[i].b, segs[j].a, segs[j].b)) return true;
    }
  }
  return false;
}

std::vector<Vec3> realize_loop(const TorusSpec& torus, const std::vector<ChartPoint>& loop,
                               double radial) {
  std::vector<Vec3> out;
  out.reserve(loop.size());
  for (const ChartPoint& p : loop) out.push_back(tube_point(torus, p.alpha, p.beta, radial));
  return out;
}

double point_to_loop_distance(const ChartPoint& p, const std::vector<ChartPoint>& loop) {
  double best = 1e300;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const ChartPoint& a = loop[i];
    const ChartPoint& b = loop[(i + 1) % n];
    const double ex = b.alpha - a.alpha, ey = b.beta - a.beta;
    const double px = p.alpha - a.alpha, py = p.beta - a.beta;
    const double len2 = ex * ex + ey * ey;
    double t = len2 > 0 ? (px * ex + py * ey) / len2 : 0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, std::hypot(px - t * ex, py - t * ey));
  }
  return best;
}

}  // namespace tg
