#pragma once

// Test-only meshes, grids, oracles and temp-dir helpers. Nothing here calls
// into the code paths it is used to check.

#include <spemb/graph.hpp>
#include <spemb/mesh.hpp>
#include <spemb/voxel.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fixtures {

using spemb::Mesh;
using spemb::Vec3;
using spemb::VoxelCoord;
using spemb::VoxelGrid;

/// Closed surface of [0,1]^3, 12 triangles.
inline Mesh unit_cube_mesh() {
  Mesh m;
  for (int i = 0; i < 8; ++i) m.vertices.push_back({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
  m.faces = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
             {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  return m;
}

/// Latitude/longitude sphere of radius 1 around the origin.
inline Mesh uv_sphere(int rings, int segments) {
  Mesh m;
  m.vertices.push_back({0, 0, 1});
  for (int r = 1; r < rings; ++r) {
    const double theta = std::numbers::pi * r / rings;
    for (int s = 0; s < segments; ++s) {
      const double phi = 2 * std::numbers::pi * s / segments;
      m.vertices.push_back({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
    }
  }
  m.vertices.push_back({0, 0, -1});
  const auto ring = [&](int r, int s) { return static_cast<std::uint32_t>(1 + (r - 1) * segments + (s % segments)); };
  const auto south = static_cast<std::uint32_t>(m.vertices.size() - 1);
  for (int s = 0; s < segments; ++s) m.faces.push_back({0, ring(1, s), ring(1, s + 1)});
  for (int r = 1; r + 1 < rings; ++r) {
    for (int s = 0; s < segments; ++s) {
      m.faces.push_back({ring(r, s), ring(r + 1, s), ring(r + 1, s + 1)});
      m.faces.push_back({ring(r, s), ring(r + 1, s + 1), ring(r, s + 1)});
    }
  }
  for (int s = 0; s < segments; ++s) m.faces.push_back({south, ring(rings - 1, s + 1), ring(rings - 1, s)});
  return m;
}

inline VoxelGrid grid_of(int resolution, const std::vector<VoxelCoord>& cells, double value = 1.0) {
  VoxelGrid g;
  g.resolution = resolution;
  for (const auto& c : cells) g.voxels[c] += value;
  return g;
}

inline VoxelGrid full_block(int nx, int ny, int nz) {
  VoxelGrid g;
  g.resolution = std::max({nx, ny, nz});
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y)
      for (int z = 0; z < nz; ++z) g.voxels[{x, y, z}] = 1.0;
  return g;
}

/// Voxels (in a grid of resolution R, mesh coords scaled by R) hit by
/// uniformly sampled points of every triangle. A point on a voxel boundary is
/// credited to the voxel with the larger index.
inline std::set<VoxelCoord> sampled_surface_voxels(const Mesh& mesh, int resolution, int samples_per_triangle,
                                                  unsigned seed = 1) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::set<VoxelCoord> hit;
  for (const auto& f : mesh.faces) {
    const Vec3 &a = mesh.vertices[f[0]], &b = mesh.vertices[f[1]], &c = mesh.vertices[f[2]];
    for (int s = 0; s < samples_per_triangle; ++s) {
      double r1 = u(rng), r2 = u(rng);
      if (r1 + r2 > 1.0) r1 = 1.0 - r1, r2 = 1.0 - r2;
      VoxelCoord v{};
      bool inside = true;
      for (int k = 0; k < 3; ++k) {
        const double p = (a[k] + r1 * (b[k] - a[k]) + r2 * (c[k] - a[k])) * resolution;
        int i = static_cast<int>(std::floor(p));
        if (i == resolution && p == resolution) i = resolution - 1;
        if (i < 0 || i >= resolution) inside = false;
        v[k] = i;
      }
      if (inside) hit.insert(v);
    }
  }
  return hit;
}

/// Every unordered voxel pair whose offset is in {-1,0,1}^3 with Manhattan
/// length at most `max_len` (1 = faces, 2 = +edges, 3 = +corners).
inline std::set<std::pair<VoxelCoord, VoxelCoord>> brute_force_adjacent_pairs(const VoxelGrid& g, int max_len) {
  std::set<std::pair<VoxelCoord, VoxelCoord>> out;
  for (auto a = g.voxels.begin(); a != g.voxels.end(); ++a) {
    for (auto b = std::next(a); b != g.voxels.end(); ++b) {
      int cheb = 0, manh = 0;
      for (int k = 0; k < 3; ++k) {
        const int d = std::abs(a->first[k] - b->first[k]);
        cheb = std::max(cheb, d);
        manh += d;
      }
      if (cheb == 1 && manh <= max_len) out.insert({a->first, b->first});
    }
  }
  return out;
}

/// Directed k-nearest lists by sorting all distances; ties by index.
inline std::vector<std::vector<std::size_t>> brute_force_knn(const std::vector<std::vector<double>>& pts,
                                                             std::size_t k) {
  std::vector<std::vector<std::size_t>> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      double s = 0;
      for (std::size_t a = 0; a < pts[i].size(); ++a) s += (pts[i][a] - pts[j][a]) * (pts[i][a] - pts[j][a]);
      d.push_back({std::sqrt(s), j});
    }
    std::sort(d.begin(), d.end());
    for (std::size_t t = 0; t < k; ++t) out[i].push_back(d[t].second);
  }
  return out;
}

/// Sum over edges of w (x_p - x_q)^2.
inline double edge_energy(const spemb::Graph& g, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& e : g.edges()) s += e.w * (x[e.p] - x[e.q]) * (x[e.p] - x[e.q]);
  return s;
}

/// Literal transcription of the bridging rule: while several components
/// remain, join the closest cross-component pair, ties by (p, q).
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> naive_bridges(const spemb::Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = i;
  const auto find = [&](std::size_t i) {
    while (label[i] != i) i = label[i];
    return i;
  };
  for (const auto& e : g.edges()) label[find(e.p)] = find(e.q);

  std::vector<std::pair<std::uint32_t, std::uint32_t>> added;
  while (true) {
    double best = -1;
    std::size_t bp = 0, bq = 0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (find(p) == find(q)) continue;
        double d = 0;
        for (std::size_t a = 0; a < g.nodes()[p].position.size(); ++a) {
          const double t = g.nodes()[p].position[a] - g.nodes()[q].position[a];
          d += t * t;
        }
        if (best < 0 || d < best) best = d, bp = p, bq = q;
      }
    }
    if (best < 0) break;
    label[find(bp)] = find(bq);
    added.push_back({static_cast<std::uint32_t>(bp), static_cast<std::uint32_t>(bq)});
  }
  return added;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("spemb_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace fixtures
