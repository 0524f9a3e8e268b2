#include "triplegear/mesh.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "triplegear/error.hpp"

namespace tg {
namespace {

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[a] = b;
  }
};

double triangle_quality(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 e0 = b - a, e1 = c - b, e2 = a - c;
  const double ss = norm2(e0) + norm2(e1) + norm2(e2);
  if (ss <= 0) return 0;
  const double area = 0.5 * norm(cross(e0, -e2));
  // 4*sqrt(3)*A / sum(l^2): 1 for equilateral, 0 for degenerate.
  return 4.0 * std::sqrt(3.0) * area / ss;
}

}  // namespace

Vec3 TriMesh::triangle_normal(std::size_t t) const {
  const auto& tri = triangles[t];
  const Vec3 e1 = vertices[tri[1]] - vertices[tri[0]];
  const Vec3 e2 = vertices[tri[2]] - vertices[tri[0]];
  const Vec3 n = cross(e1, e2);
  const double len = norm(n);
  return len > 0 ? n / len : Vec3{0, 0, 0};
}

double TriMesh::signed_volume() const {
  // Sum of signed tetrahedra against the origin; exact for closed meshes.
  double acc = 0;
  for (const auto& tri : triangles) {
    const Vec3& a = vertices[tri[0]];
    const Vec3& b = vertices[tri[1]];
    const Vec3& c = vertices[tri[2]];
    acc += dot(a, cross(b, c));
  }
  return acc / 6.0;
}

MeshReport validate(const TriMesh& mesh) {
  MeshReport rep;
  const std::size_t nv = mesh.vertices.size();
  for (const auto& tri : mesh.triangles) {
    for (std::uint32_t idx : tri) {
      if (idx >= nv) return rep;  // out-of-range: everything stays false
    }
  }

  // Per undirected edge: total use count and signed (a<b minus b<a) count.
  std::unordered_map<std::uint64_t, std::pair<int, int>> edges;
  edges.reserve(mesh.triangles.size() * 3);
  rep.min_triangle_quality = mesh.triangles.empty() ? 0 : 1;
  for (const auto& tri : mesh.triangles) {
    const double q = triangle_quality(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                      mesh.vertices[tri[2]]);
    rep.min_triangle_quality = std::min(rep.min_triangle_quality, q);
    if (q == 0 || tri[0] == tri[1] || tri[1] == tri[2] || tri[2] == tri[0]) {
      ++rep.degenerate_triangle_count;
    }
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t a = tri[k], b = tri[(k + 1) % 3];
      auto& e = edges[edge_key(a, b)];
      ++e.first;
      e.second += (a < b) ? 1 : -1;
    }
  }

  bool oriented = true;
  for (const auto& [key, use] : edges) {
    (void)key;
    if (use.first == 1) ++rep.boundary_edge_count;
    if (use.first > 2) ++rep.nonmanifold_edge_count;
    if (use.first == 2 && use.second != 0) oriented = false;
  }
  rep.watertight = rep.boundary_edge_count == 0 && rep.nonmanifold_edge_count == 0 &&
                   !mesh.triangles.empty();
  rep.orientation_consistent = rep.watertight && oriented;

  UnionFind uf(nv);
  for (const auto& tri : mesh.triangles) {
    uf.unite(tri[0], tri[1]);
    uf.unite(tri[1], tri[2]);
  }
  std::vector<bool> used(nv, false);
  for (const auto& tri : mesh.triangles)
    for (std::uint32_t idx : tri) used[idx] = true;
  std::vector<bool> seen(nv, false);
  std::size_t used_vertices = 0;
  for (std::uint32_t v = 0; v < nv; ++v) {
    if (!used[v]) continue;
    ++used_vertices;
    const std::uint32_t root = uf.find(v);
    if (!seen[root]) {
      seen[root] = true;
      ++rep.component_count;
    }
  }
  rep.euler_characteristic = static_cast<long>(used_vertices) -
                             static_cast<long>(edges.size()) +
                             static_cast<long>(mesh.triangles.size());
  rep.signed_volume = rep.watertight ? mesh.signed_volume() : 0;
  return rep;
}

TriMesh triangulate(const ParamSurface& s, double resolution) {
  if (!s.f || resolution <= 0 || !(s.u1 > s.u0) || !(s.v1 > s.v0))
    throw Error(ErrorCode::InvalidInput, "triangulate: bad surface or resolution");
  if (s.collapse_v0 && s.wrap_v)
    throw Error(ErrorCode::InvalidInput, "triangulate: pole on wrapped boundary");

  // Probe a coarse grid for the longest parameter-line arc, then size the
  // grid so sampled edges stay under the resolution target.
  const int probe = 33;
  double len_u = 0, len_v = 0;
  for (int j = 0; j < probe; ++j) {
    const double v = s.v0 + (s.v1 - s.v0) * j / (probe - 1);
    double acc = 0;
    Vec3 prev = s.f(s.u0, v);
    for (int i = 1; i < probe; ++i) {
      const Vec3 p = s.f(s.u0 + (s.u1 - s.u0) * i / (probe - 1), v);
      acc += dist(p, prev);
      prev = p;
    }
    len_u = std::max(len_u, acc);
  }
  for (int i = 0; i < probe; ++i) {
    const double u = s.u0 + (s.u1 - s.u0) * i / (probe - 1);
    double acc = 0;
    Vec3 prev = s.f(u, s.v0);
    for (int j = 1; j < probe; ++j) {
      const Vec3 p = s.f(u, s.v0 + (s.v1 - s.v0) * j / (probe - 1));
      acc += dist(p, prev);
      prev = p;
    }
    len_v = std::max(len_v, acc);
  }
  const auto cells = [&](double len) {
    return std::max(3, static_cast<int>(std::ceil(len / resolution)));
  };
  const int nu = cells(len_u);
  const int nv = cells(len_v);

  // Vertex grid rows j = 0..nv; wrapped/collapsed boundaries share vertices.
  TriMesh mesh;
  const int cols = s.wrap_u ? nu : nu + 1;
  std::vector<std::vector<std::uint32_t>> row(nv + 1);
  for (int j = 0; j <= nv; ++j) {
    const double v = s.v0 + (s.v1 - s.v0) * j / nv;
    const bool pole = (j == 0 && s.collapse_v0) || (j == nv && s.collapse_v1);
    if (pole) {
      row[j].assign(static_cast<std::size_t>(cols), static_cast<std::uint32_t>(mesh.vertices.size()));
      mesh.vertices.push_back(s.f(s.u0, v));
      continue;
    }
    if (j == nv && s.wrap_v) {
      row[j] = row[0];
      continue;
    }
    row[j].resize(static_cast<std::size_t>(cols));
    for (int i = 0; i < cols; ++i) {
      row[j][static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(mesh.vertices.size());
      mesh.vertices.push_back(s.f(s.u0 + (s.u1 - s.u0) * i / nu, v));
    }
  }
  const auto at = [&](int j, int i) {
    return row[j][static_cast<std::size_t>(s.wrap_u ? (i % nu) : i)];
  };
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      const std::uint32_t a = at(j, i), b = at(j, i + 1);
      const std::uint32_t c = at(j + 1, i + 1), d = at(j + 1, i);
      if (a != b && b != c && c != a) mesh.triangles.push_back({a, b, c});
      if (a != c && c != d && d != a) mesh.triangles.push_back({a, c, d});
    }
  }
  return mesh;
}

namespace {

void put_f32(std::string& out, float v) {
  std::uint32_t bits = std::bit_cast<std::uint32_t>(v);
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((bits >> (8 * k)) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

float get_f32(const std::string& in, std::size_t off) {
  std::uint32_t bits = 0;
  for (int k = 0; k < 4; ++k)
    bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[off + k])) << (8 * k);
  return std::bit_cast<float>(bits);
}

std::array<float, 3> f32_vec(const Vec3& v) {
  return {static_cast<float>(v.x), static_cast<float>(v.y), static_cast<float>(v.z)};
}

void append_g9(std::string& out, float v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(v));
  out += buf;
}

struct Welder {
  struct KeyHash {
    std::size_t operator()(const std::array<std::uint32_t, 3>& k) const {
      std::size_t h = 1469598103934665603ull;
      for (std::uint32_t w : k) {
        h ^= w;
        h *= 1099511628211ull;
      }
      return h;
    }
  };
  std::unordered_map<std::array<std::uint32_t, 3>, std::uint32_t, KeyHash> index;
  TriMesh mesh;

  std::uint32_t add(float x, float y, float z) {
    const std::array<std::uint32_t, 3> key = {std::bit_cast<std::uint32_t>(x),
                                              std::bit_cast<std::uint32_t>(y),
                                              std::bit_cast<std::uint32_t>(z)};
    auto [it, fresh] = index.try_emplace(key, static_cast<std::uint32_t>(mesh.vertices.size()));
    if (fresh)
      mesh.vertices.push_back({static_cast<double>(x), static_cast<double>(y), static_cast<double>(z)});
    return it->second;
  }
};

[[noreturn]] void parse_fail(std::size_t offset, const std::string& what) {
  throw Error(ErrorCode::Parse, "stl parse error at byte " + std::to_string(offset) + ": " + what);
}

// Whitespace-delimited scanner that remembers where each token started.
struct TokenScanner {
  const std::string& text;
  std::size_t pos = 0;
  std::size_t last_start = 0;

  explicit TokenScanner(const std::string& t) : text(t) {}

  bool next(std::string& tok) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) return false;
    last_start = pos;
    const std::size_t begin = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    tok = text.substr(begin, pos - begin);
    return true;
  }

  void expect(const std::string& want) {
    std::string tok;
    if (!next(tok)) parse_fail(text.size(), "expected '" + want + "', got end of input");
    if (tok != want) parse_fail(last_start, "expected '" + want + "', got '" + tok + "'");
  }

  float number() {
    std::string tok;
    if (!next(tok)) parse_fail(text.size(), "expected number, got end of input");
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') parse_fail(last_start, "expected number, got '" + tok + "'");
    return static_cast<float>(v);
  }
};

TriMesh read_stl_ascii(const std::string& bytes) {
  TokenScanner sc(bytes);
  sc.expect("solid");
  // Optional name: single token unless the next token opens a facet/end.
  std::string tok;
  std::size_t after_solid = sc.pos;
  if (sc.next(tok) && tok != "facet" && tok != "endsolid") {
    after_solid = sc.pos;
  }
  sc.pos = after_solid;

  Welder weld;
  while (true) {
    if (!sc.next(tok)) parse_fail(bytes.size(), "expected 'facet' or 'endsolid', got end of input");
    if (tok == "endsolid") break;
    if (tok != "facet") parse_fail(sc.last_start, "expected 'facet' or 'endsolid', got '" + tok + "'");
    sc.expect("normal");
    sc.number();
    sc.number();
    sc.number();
    sc.expect("outer");
    sc.expect("loop");
    std::array<std::uint32_t, 3> tri{};
    for (int k = 0; k < 3; ++k) {
      sc.expect("vertex");
      const float x = sc.number();
      const float y = sc.number();
      const float z = sc.number();
      tri[static_cast<std::size_t>(k)] = weld.add(x, y, z);
    }
    sc.expect("endloop");
    sc.expect("endfacet");
    weld.mesh.triangles.push_back(tri);
  }
  return std::move(weld.mesh);
}

TriMesh read_stl_binary(const std::string& bytes) {
  if (bytes.size() < 84) parse_fail(bytes.size(), "binary stl shorter than 84-byte preamble");
  std::uint32_t n = 0;
  for (int k = 0; k < 4; ++k)
    n |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[80 + k])) << (8 * k);
  const std::size_t expect = 84 + 50ull * n;
  if (bytes.size() != expect)
    parse_fail(80, "triangle count " + std::to_string(n) + " needs " + std::to_string(expect) +
                       " bytes, file has " + std::to_string(bytes.size()));
  if (n > 50'000'000) parse_fail(80, "triangle count " + std::to_string(n) + " exceeds limit");

  Welder weld;
  weld.mesh.triangles.reserve(n);
  for (std::uint32_t t = 0; t < n; ++t) {
    const std::size_t base = 84 + 50ull * t + 12;  // skip stored normal
    std::array<std::uint32_t, 3> tri{};
    for (int k = 0; k < 3; ++k) {
      const std::size_t off = base + 12ull * static_cast<std::size_t>(k);
      tri[static_cast<std::size_t>(k)] =
          weld.add(get_f32(bytes, off), get_f32(bytes, off + 4), get_f32(bytes, off + 8));
    }
    weld.mesh.triangles.push_back(tri);
  }
  return std::move(weld.mesh);
}

}  // namespace

std::string write_stl(const TriMesh& mesh, StlFormat format) {
  for (const auto& tri : mesh.triangles)
    for (std::uint32_t idx : tri)
      if (idx >= mesh.vertices.size())
        throw Error(ErrorCode::InvalidInput, "write_stl: triangle index out of range");

  if (format == StlFormat::Binary) {
    std::string out;
    out.reserve(84 + 50 * mesh.triangles.size());
    std::string header = "binary stl; units arbitrary";
    header.resize(80, '\0');
    out += header;
    put_u32(out, static_cast<std::uint32_t>(mesh.triangles.size()));
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto n = f32_vec(mesh.triangle_normal(t));
      for (float c : n) put_f32(out, c);
      for (std::uint32_t idx : mesh.triangles[t]) {
        const auto v = f32_vec(mesh.vertices[idx]);
        for (float c : v) put_f32(out, c);
      }
      out.push_back('\0');
      out.push_back('\0');
    }
    return out;
  }

  // Ascii floats carry 9 significant digits so a reread reproduces the same
  // float32 values as the binary path.
  std::string out = "solid mesh\n";
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto n = f32_vec(mesh.triangle_normal(t));
    out += "  facet normal";
    for (float c : n) {
      out += ' ';
      append_g9(out, c);
    }
    out += "\n    outer loop\n";
    for (std::uint32_t idx : mesh.triangles[t]) {
      const auto v = f32_vec(mesh.vertices[idx]);
      out += "      vertex";
      for (float c : v) {
        out += ' ';
        append_g9(out, c);
      }
      out += '\n';
    }
    out += "    endloop\n  endfacet\n";
  }
  out += "endsolid mesh\n";
  return out;
}

TriMesh read_stl(const std::string& bytes) {
  // Binary detection by exact size bookkeeping; anything else must read as
  // ascii starting with 'solid'.
  if (bytes.size() >= 84) {
    std::uint32_t n = 0;
    for (int k = 0; k < 4; ++k)
      n |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[80 + k])) << (8 * k);
    if (bytes.size() == 84 + 50ull * n) {
      bool ascii_header = bytes.compare(0, 5, "solid") == 0;
      if (!ascii_header) return read_stl_binary(bytes);
      // Size-consistent file that also starts with 'solid': trust the grammar.
      try {
        return read_stl_ascii(bytes);
      } catch (const Error&) {
        return read_stl_binary(bytes);
      }
    }
  }
  std::size_t first = 0;
  while (first < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[first]))) ++first;
  if (bytes.compare(first, 5, "solid") == 0) return read_stl_ascii(bytes);
  parse_fail(first, "not a size-consistent binary stl and no 'solid' header");
}

void write_stl_file(const TriMesh& mesh, const std::string& path, StlFormat format) {
  const std::string bytes = write_stl(mesh, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot open for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::InvalidInput, "write failed: " + path);
}

TriMesh read_stl_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Parse, "cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_stl(ss.str());
}

}  // namespace tg
