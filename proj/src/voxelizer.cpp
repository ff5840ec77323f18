#include <spemb/error.hpp>
#include <spemb/voxel.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "text_lines.hpp"

namespace spemb {

double VoxelGrid::mass() const {
  double total = 0.0;
  for (const auto& [coord, value] : voxels) total += value;
  return total;
}

namespace voxel {

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Separated along `axis` when the projected triangle interval misses the
// projected box interval [-r, r]. Touching intervals are not separated.
bool separated(const Vec3& axis, const Vec3& v0, const Vec3& v1, const Vec3& v2, double half) {
  const double p0 = dot(axis, v0), p1 = dot(axis, v1), p2 = dot(axis, v2);
  const double r = half * (std::abs(axis[0]) + std::abs(axis[1]) + std::abs(axis[2]));
  return std::min({p0, p1, p2}) > r || std::max({p0, p1, p2}) < -r;
}

int clamp_index(double v, int resolution) {
  if (v < 0.0) return 0;
  if (v >= resolution - 1) return resolution - 1;
  return static_cast<int>(v);
}

}  // namespace

Mesh normalize_mesh(const Mesh& mesh) {
  if (mesh.vertices.empty()) throw Error("degenerate mesh extent: no vertices");
  Vec3 lo = mesh.vertices.front(), hi = lo;
  for (const Vec3& v : mesh.vertices) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], v[a]);
      hi[a] = std::max(hi[a], v[a]);
    }
  }
  const double extent = std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
  if (!(extent > 0.0)) throw Error("degenerate mesh extent: all vertices coincide");

  const double scale = 1.0 / extent;
  Mesh out = mesh;
  for (Vec3& v : out.vertices) {
    for (int a = 0; a < 3; ++a) {
      const double mid = 0.5 * (lo[a] + hi[a]);
      v[a] = (v[a] - mid) * scale + 0.5;
    }
  }
  return out;
}

bool triangle_box_overlap(const Vec3& center, double half, const std::array<Vec3, 3>& tri) {
  const Vec3 v0 = sub(tri[0], center), v1 = sub(tri[1], center), v2 = sub(tri[2], center);

  // Box face normals.
  for (int a = 0; a < 3; ++a) {
    const double lo = std::min({v0[a], v1[a], v2[a]});
    const double hi = std::max({v0[a], v1[a], v2[a]});
    if (lo > half || hi < -half) return false;
  }

  // Cross products of triangle edges with box axes.
  const std::array<Vec3, 3> edges{sub(v1, v0), sub(v2, v1), sub(v0, v2)};
  constexpr std::array<Vec3, 3> kAxes{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  for (const Vec3& e : edges) {
    for (const Vec3& u : kAxes) {
      if (separated(cross(e, u), v0, v1, v2, half)) return false;
    }
  }

  // Triangle plane.
  const Vec3 normal = cross(edges[0], edges[1]);
  return !separated(normal, v0, v1, v2, half);
}

VoxelGrid voxelize_surface(const Mesh& mesh, int resolution) {
  if (resolution < 1) throw Error("resolution must be >= 1");
  if (mesh.faces.empty()) throw Error("cannot voxelize a mesh with no faces");

  VoxelGrid grid;
  grid.resolution = resolution;
  const double r = resolution;
  for (const Triangle& face : mesh.faces) {
    // Work in voxel units: voxel (x,y,z) is the cube [x,x+1]×[y,y+1]×[z,z+1].
    std::array<Vec3, 3> tri{};
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = mesh.vertices.at(face[k]);
      tri[k] = {p[0] * r, p[1] * r, p[2] * r};
    }
    std::array<int, 3> lo{}, hi{};
    bool outside = false;
    for (int a = 0; a < 3; ++a) {
      const double mn = std::min({tri[0][a], tri[1][a], tri[2][a]});
      const double mx = std::max({tri[0][a], tri[1][a], tri[2][a]});
      if (mx < 0.0 || mn > r) outside = true;
      lo[a] = clamp_index(std::floor(mn) - 1.0, resolution);
      hi[a] = clamp_index(std::floor(mx), resolution);
    }
    if (outside) continue;
    for (int x = lo[0]; x <= hi[0]; ++x) {
      for (int y = lo[1]; y <= hi[1]; ++y) {
        for (int z = lo[2]; z <= hi[2]; ++z) {
          if (triangle_box_overlap({x + 0.5, y + 0.5, z + 0.5}, 0.5, tri)) grid.voxels[{x, y, z}] = 1.0;
        }
      }
    }
  }
  return grid;
}

VoxelGrid fill_interior(const VoxelGrid& shell) {
  const int n = shell.resolution;
  const auto index = [n](int x, int y, int z) {
    return (static_cast<std::size_t>(x) * n + static_cast<std::size_t>(y)) * n + static_cast<std::size_t>(z);
  };
  std::vector<char> occupied(static_cast<std::size_t>(n) * n * n, 0), outside(occupied.size(), 0);
  for (const auto& [c, v] : shell.voxels) occupied[index(c[0], c[1], c[2])] = 1;

  std::deque<VoxelCoord> queue;
  const auto seed = [&](int x, int y, int z) {
    const std::size_t i = index(x, y, z);
    if (!occupied[i] && !outside[i]) {
      outside[i] = 1;
      queue.push_back({x, y, z});
    }
  };
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      seed(0, a, b), seed(n - 1, a, b);
      seed(a, 0, b), seed(a, n - 1, b);
      seed(a, b, 0), seed(a, b, n - 1);
    }
  }
  constexpr int kSteps[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  while (!queue.empty()) {
    const VoxelCoord c = queue.front();
    queue.pop_front();
    for (const auto& s : kSteps) {
      const VoxelCoord d{c[0] + s[0], c[1] + s[1], c[2] + s[2]};
      if (shell.contains(d)) seed(d[0], d[1], d[2]);
    }
  }

  VoxelGrid solid = shell;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      for (int z = 0; z < n; ++z) {
        const std::size_t i = index(x, y, z);
        if (!occupied[i] && !outside[i]) solid.voxels[{x, y, z}] = 1.0;
      }
    }
  }
  return solid;
}

VoxelGrid parse_voxel_text(std::istream& in) {
  detail::LineReader reader(in);
  detail::Line line;
  if (!reader.next(line)) throw ParseError(reader.line_number(), "missing resolution line");
  if (line.tokens.size() != 1) throw ParseError(line.number, "expected a single resolution value");
  const std::size_t res = detail::to_index(line.tokens[0], line.number, "resolution");
  if (res < 1 || res > 4096) throw ParseError(line.number, "resolution out of range");

  VoxelGrid grid;
  grid.resolution = static_cast<int>(res);
  while (reader.next(line)) {
    if (line.tokens.size() != 4) {
      throw ParseError(line.number, "expected 'x y z v', found " + std::to_string(line.tokens.size()) + " tokens");
    }
    VoxelCoord c{};
    for (int a = 0; a < 3; ++a) {
      long long v = 0;
      const std::string& tok = line.tokens[a];
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec == std::errc::result_out_of_range) throw ParseError(line.number, "coordinate out of range");
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(line.number, "non-numeric token '" + tok + "'");
      }
      if (v < 0 || v >= grid.resolution) {
        throw ParseError(line.number, "coordinate out of range: " + tok + " not in [0," +
                                          std::to_string(grid.resolution) + ")");
      }
      c[a] = static_cast<int>(v);
    }
    const double value = detail::to_real(line.tokens[3], line.number);
    if (!(value > 0.0)) throw ParseError(line.number, "voxel value must be positive");
    grid.voxels[c] += value;
  }
  if (grid.voxels.empty()) throw ParseError(reader.line_number(), "grid has no voxels");
  return grid;
}

VoxelGrid parse_voxel_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_voxel_text(in);
}

VoxelGrid load_voxel_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return parse_voxel_text(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.message());
  }
}

void write_voxel_text(const VoxelGrid& grid, std::ostream& out) {
  out << grid.resolution << '\n';
  for (const auto& [c, v] : grid.voxels) {
    out << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << detail::format_real(v) << '\n';
  }
}

}  // namespace voxel
}  // namespace spemb
