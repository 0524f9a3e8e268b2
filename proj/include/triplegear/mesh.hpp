#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "triplegear/geom.hpp"

namespace tg {

// Indexed triangle mesh. Invariants: indices in range; orientation consistent
// (each shared edge traversed once in each direction) for closed solids.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;

  Vec3 triangle_normal(std::size_t t) const;
  double signed_volume() const;
};

struct MeshReport {
  bool watertight = false;
  bool orientation_consistent = false;
  long euler_characteristic = 0;
  int component_count = 0;
  double min_triangle_quality = 0;  // 1 for equilateral, 0 for degenerate
  std::size_t boundary_edge_count = 0;
  std::size_t nonmanifold_edge_count = 0;
  std::size_t degenerate_triangle_count = 0;
  double signed_volume = 0;
};

// Full report; never throws on bad meshes.
MeshReport validate(const TriMesh& mesh);

// Parametric surface over [u0,u1] x [v0,v1]. wrap_* identifies the opposite
// boundary; collapse_v* identifies an entire v-boundary to one point (pole).
struct ParamSurface {
  std::function<Vec3(double, double)> f;
  double u0 = 0, u1 = 1, v0 = 0, v1 = 1;
  bool wrap_u = false, wrap_v = false;
  bool collapse_v0 = false, collapse_v1 = false;
};

// Watertight triangulation with shared boundary vertices; resolution is the
// max edge length target. Grid sizes derive from sampled arc lengths.
TriMesh triangulate(const ParamSurface& s, double resolution);

enum class StlFormat { Binary, Ascii };

// Binary: 80-byte header, u32 triangle count, 50 bytes per triangle,
// total exactly 84 + 50*n; ascii: standard solid/facet grammar.
std::string write_stl(const TriMesh& mesh, StlFormat format);

// Triangle soup welded into an indexed mesh by exact float32 bit equality.
// Throws Parse with a byte offset on malformed input.
TriMesh read_stl(const std::string& bytes);

void write_stl_file(const TriMesh& mesh, const std::string& path, StlFormat format);
TriMesh read_stl_file(const std::string& path);

}  // namespace tg
