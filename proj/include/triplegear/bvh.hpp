#pragma once

#include <vector>

#include "triplegear/mesh.hpp"

namespace tg {

struct Aabb {
  Vec3 lo{1e300, 1e300, 1e300};
  Vec3 hi{-1e300, -1e300, -1e300};

  void grow(const Vec3& p);
  void grow(const Aabb& b);
  double distance2(const Vec3& p) const;
  bool ray_hits(const Vec3& origin, const Vec3& inv_dir) const;
};

// Static BVH over a mesh's triangles: nearest-point queries plus a ray-parity
// inside test. The mesh must stay alive while the tree is used.
class MeshBvh {
 public:
  explicit MeshBvh(const TriMesh& mesh);

  // Unsigned distance from p to the surface.
  double distance(const Vec3& p, double early_out = 1e300) const;
  // Nearest surface point to p.
  Vec3 closest_point(const Vec3& p) const;
  // Parity of crossings along a fixed ray; mesh must be closed.
  bool contains(const Vec3& p) const;
  // Negative inside, positive outside. inside_band: skip the parity test for
  // points farther than this (they count as outside).
  double signed_distance(const Vec3& p, double inside_band = 1e300) const;

  const TriMesh& mesh() const { return mesh_; }

 private:
  struct Node {
    Aabb box;
    int left = -1, right = -1;  // internal children
    int first = 0, count = 0;   // leaf triangle range
  };

  int build(int first, int count, std::vector<Vec3>& centroids, int depth);
  double nearest2(int node, const Vec3& p, double best2) const;
  double nearest_point2(int node, const Vec3& p, double best2, Vec3& best) const;
  int ray_crossings(int node, const Vec3& origin, const Vec3& dir, const Vec3& inv_dir,
                    bool& degenerate) const;

  const TriMesh& mesh_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;  // triangle indices grouped by leaf
};

double point_triangle_distance2(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);
Vec3 point_triangle_closest(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace tg
