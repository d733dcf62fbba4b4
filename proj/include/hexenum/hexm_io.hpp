#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hexenum/combinatorial.hpp"
#include "hexenum/geometry.hpp"

namespace hexenum {

/// Plain-text mesh file:
///
///     hexm 1
///     vertices N
///     x y z b          (N lines, b = 1 on the boundary)
///     quads M          (optional section)
///     a b c d          (M lines)
///     hexes K          (optional section)
///     v1 ... v8        (K lines, corner convention)
///
/// Coordinates are written with 17 significant digits so files round-trip.
struct HexmFile {
  std::vector<Vec3> coords;
  std::vector<std::uint8_t> boundary_flags;
  std::optional<std::vector<std::array<VertexId, 4>>> quads;
  std::optional<std::vector<HexCorners>> hexes;

  bool operator==(const HexmFile&) const = default;
};

/// Throws InputError with a line number on malformed input.
HexmFile read_hexm(std::istream& in);
HexmFile read_hexm_file(const std::string& path);
void write_hexm(std::ostream& out, const HexmFile& f);
void write_hexm_file(const std::string& path, const HexmFile& f);

/// Boundary surface of a file: its quad section, or the boundary of its hexes.
/// Labels must be dense and boundary-first (0..n_b-1).
QuadSurface surface_of(const HexmFile& f);

GeoMesh to_geomesh(const HexmFile& f);
HexmFile from_geomesh(const GeoMesh& m, bool with_boundary_quads = false);

}  // namespace hexenum
