#include <spemb/error.hpp>
#include <spemb/mesh.hpp>

#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "text_lines.hpp"

namespace spemb::mesh_io {

namespace {

struct Counts {
  std::size_t vertices = 0;
  std::size_t faces = 0;
};

Counts parse_counts(const detail::Line& line, std::size_t first) {
  const auto& tok = line.tokens;
  const std::size_t n = tok.size() - first;
  if (n < 2 || n > 3) {
    throw ParseError(line.number, "malformed OFF header: expected vertex, face and edge counts");
  }
  Counts c;
  c.vertices = detail::to_index(tok[first], line.number, "vertex count");
  c.faces = detail::to_index(tok[first + 1], line.number, "face count");
  if (n == 3) detail::to_index(tok[first + 2], line.number, "edge count");
  return c;
}

}  // namespace

OffParseResult parse_off(std::istream& in) {
  detail::LineReader reader(in);
  detail::Line line;

  if (!reader.next(line)) throw ParseError(reader.line_number(), "malformed OFF header: empty input");
  const std::string& magic = line.tokens.front();
  if (magic.rfind("OFF", 0) != 0) {
    throw ParseError(line.number, "malformed OFF header: expected 'OFF', found '" + magic + "'");
  }

  Counts counts;
  if (magic.size() > 3) {
    // `OFF490 518 0`: the vertex count is glued to the keyword.
    line.tokens.front() = magic.substr(3);
    counts = parse_counts(line, 0);
  } else if (line.tokens.size() > 1) {
    counts = parse_counts(line, 1);
  } else {
    if (!reader.next(line)) throw ParseError(reader.line_number(), "malformed OFF header: missing counts");
    counts = parse_counts(line, 0);
  }
  if (counts.vertices == 0) throw ParseError(line.number, "mesh has no vertices");
  if (counts.vertices > std::numeric_limits<std::uint32_t>::max()) {
    throw ParseError(line.number, "vertex count too large");
  }

  OffParseResult result;
  Mesh& mesh = result.mesh;
  mesh.vertices.reserve(counts.vertices);
  for (std::size_t i = 0; i < counts.vertices; ++i) {
    if (!reader.next(line)) {
      throw ParseError(reader.line_number(), "count mismatch: expected " + std::to_string(counts.vertices) +
                                                 " vertices, found " + std::to_string(i));
    }
    if (line.tokens.size() != 3) {
      throw ParseError(line.number, "expected 3 vertex coordinates, found " + std::to_string(line.tokens.size()));
    }
    Vec3 v{};
    for (int a = 0; a < 3; ++a) v[a] = detail::to_real(line.tokens[a], line.number);
    mesh.vertices.push_back(v);
  }

  for (std::size_t f = 0; f < counts.faces; ++f) {
    if (!reader.next(line)) {
      throw ParseError(reader.line_number(), "count mismatch: expected " + std::to_string(counts.faces) +
                                                 " faces, found " + std::to_string(f));
    }
    const std::size_t arity = detail::to_index(line.tokens[0], line.number, "face vertex count");
    if (line.tokens.size() < arity + 1) {
      throw ParseError(line.number, "face declares " + std::to_string(arity) + " vertices but lists " +
                                        std::to_string(line.tokens.size() - 1));
    }
    std::vector<std::uint32_t> poly(arity);
    for (std::size_t k = 0; k < arity; ++k) {
      const std::size_t idx = detail::to_index(line.tokens[k + 1], line.number, "face index");
      if (idx >= mesh.vertices.size()) {
        throw ParseError(line.number, "face index out of range: " + std::to_string(idx) + " >= " +
                                          std::to_string(mesh.vertices.size()));
      }
      poly[k] = static_cast<std::uint32_t>(idx);
    }
    // Trailing per-face color values are validated as numbers and ignored.
    for (std::size_t k = arity + 1; k < line.tokens.size(); ++k) detail::to_real(line.tokens[k], line.number);

    if (arity < 3) {
      ++result.degenerate_faces;
      continue;
    }
    for (std::size_t k = 1; k + 1 < arity; ++k) {
      const Triangle t{poly[0], poly[k], poly[k + 1]};
      if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
        ++result.degenerate_faces;
        continue;
      }
      mesh.faces.push_back(t);
    }
  }

  if (reader.next(line)) {
    throw ParseError(line.number, "count mismatch: unexpected content after " + std::to_string(counts.faces) +
                                      " declared faces");
  }
  if (mesh.faces.empty()) throw ParseError(reader.line_number(), "mesh has no non-degenerate faces");
  return result;
}

OffParseResult parse_off(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_off(in);
}

OffParseResult load_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return parse_off(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.message());
  }
}

void write_off(const Mesh& mesh, std::ostream& out) {
  out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.faces.size() << " 0\n";
  for (const Vec3& v : mesh.vertices) {
    out << detail::format_real(v[0]) << ' ' << detail::format_real(v[1]) << ' ' << detail::format_real(v[2])
        << '\n';
  }
  for (const Triangle& t : mesh.faces) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace spemb::mesh_io
