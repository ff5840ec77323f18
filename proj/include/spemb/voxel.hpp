#pragma once

#include <spemb/mesh.hpp>

#include <array>
#include <iosfwd>
#include <map>
#include <string_view>

namespace spemb {

using VoxelCoord = std::array<int, 3>;

/// Sparse R×R×R grid. Only voxels with a positive value are stored; the map
/// order is lexicographic in (x, y, z).
struct VoxelGrid {
  int resolution = 0;
  std::map<VoxelCoord, double> voxels;

  bool contains(const VoxelCoord& c) const {
    return c[0] >= 0 && c[1] >= 0 && c[2] >= 0 && c[0] < resolution && c[1] < resolution && c[2] < resolution;
  }
  /// Sum of all voxel values.
  double mass() const;
};

namespace voxel {

/// Translates and uniformly scales `mesh` so its bounding box has longest
/// side 1 and is centered in the unit cube.
Mesh normalize_mesh(const Mesh& mesh);

/// Marks every voxel whose closed cube overlaps a triangle (separating-axis
/// test, touching counts as overlap). Expects coordinates in [0,1]^3; parts
/// of triangles outside the cube are clipped away.
VoxelGrid voxelize_surface(const Mesh& mesh, int resolution);

/// True when the closed box `center ± half` and the triangle share a point.
bool triangle_box_overlap(const Vec3& center, double half, const std::array<Vec3, 3>& tri);

/// Marks voxels not reachable from outside the grid through empty voxels
/// (6-connectivity) as interior, value 1.0.
VoxelGrid fill_interior(const VoxelGrid& shell);

/// Reads `R` followed by `x y z v` lines. Duplicate coordinates are summed.
VoxelGrid parse_voxel_text(std::istream& in);
VoxelGrid parse_voxel_text(std::string_view text);
VoxelGrid load_voxel_text(const std::string& path);

void write_voxel_text(const VoxelGrid& grid, std::ostream& out);

}  // namespace voxel
}  // namespace spemb
