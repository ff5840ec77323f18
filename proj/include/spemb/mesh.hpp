#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace spemb {

using Vec3 = std::array<double, 3>;
using Triangle = std::array<std::uint32_t, 3>;

/// Indexed triangle soup. Polygons are fan-triangulated on load.
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> faces;
};

namespace mesh_io {

struct OffParseResult {
  Mesh mesh;
  /// Triangles dropped because they repeated a vertex index.
  std::size_t degenerate_faces = 0;
};

/// Parses an ASCII OFF document. Accepts `OFF` alone on the first line or
/// followed by the counts (`OFF n m k`, also the glued `OFFn m k` form seen
/// in ModelNet). Every rejection is a ParseError naming the line.
OffParseResult parse_off(std::istream& in);
OffParseResult parse_off(std::string_view text);

/// Loads an OFF file; unreadable files raise spemb::Error naming the path.
OffParseResult load_off(const std::string& path);

/// Writes `mesh` as OFF with round-trip precision.
void write_off(const Mesh& mesh, std::ostream& out);

}  // namespace mesh_io
}  // namespace spemb
