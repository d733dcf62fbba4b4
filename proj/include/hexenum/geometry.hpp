#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hexenum/combinatorial.hpp"

namespace hexenum {

using Vec3 = std::array<double, 3>;
/// Hex corners in the reference convention, positively oriented when the
/// trilinear map has positive Jacobian.
using HexCorners = std::array<VertexId, 8>;

/// Hexahedral mesh with coordinates. Hexes keep their orientation, which the
/// canonical combinatorial form discards.
struct GeoMesh {
  std::vector<Vec3> coords;
  std::vector<HexCorners> hexes;
  /// 1 for vertices on a facet used by a single hex.
  std::vector<std::uint8_t> is_boundary;

  std::size_t n_vertices() const { return coords.size(); }
  HexComplex complex() const;
  /// Recomputes is_boundary from the facet use counts.
  void refresh_boundary_flags();
};

struct ValidityReport {
  /// Minimum over corners and interior samples of every hex.
  double min_jacobian = 0.0;
  double min_corner_jacobian = 0.0;
  std::vector<std::size_t> invalid_hexes;

  bool valid() const { return invalid_hexes.empty(); }
};

/// Jacobian determinant of the trilinear map of a hex at reference point
/// (u, v, w) in [0,1]^3.
double jacobian_at(const std::array<Vec3, 8>& corners, double u, double v, double w);

/// Evaluates the Jacobian at the 8 corners and at an s^3 grid of interior
/// points of every hex. A hex is invalid when any value is <= 0.
///
/// This is a sampled proxy: it can miss negative regions between samples.
ValidityReport validity(const GeoMesh& mesh, std::size_t samples_per_axis = 3);

struct UntangleOptions {
  std::size_t max_iters = 1000;
  std::size_t samples_per_axis = 3;
  /// Success threshold on Jacobians, relative to the cube of the mean edge length.
  double margin = 1e-9;
};

struct UntangleResult {
  bool success = false;
  std::size_t sweeps = 0;
  double min_jacobian = 0.0;
};

/// Moves vertices with fixed[v] == 0 until every sampled Jacobian exceeds the
/// margin. Each sweep relocates one vertex at a time to raise the smallest
/// Jacobian around it. On failure the coordinates are restored.
UntangleResult untangle(GeoMesh& mesh, std::span<const std::uint8_t> fixed, const UntangleOptions& options = {});

/// Same hex with the opposite orientation (top and bottom swapped).
HexCorners flipped(const HexCorners& h);

/// Cyclic orientation comparison of two quads on the same vertex set:
/// +1 same, -1 reversed, 0 not the same quad.
int compare_orientation(const std::array<VertexId, 4>& a, const std::array<VertexId, 4>& b);

/// Orders every hex so that neighbours see their shared facet with opposite
/// orientations and each seed facet (outward orientation, keyed by its
/// canonical form) is seen with the seed's orientation. Returns nullopt when
/// no consistent orientation exists.
std::optional<std::vector<HexCorners>> orient_hexes(std::span<const CanonicalHex> hexes,
                                                    const std::map<CanonicalQuad, std::array<VertexId, 4>>& seeds);

/// Outward-oriented boundary facets of an oriented mesh.
std::map<CanonicalQuad, std::array<VertexId, 4>> outward_boundary_facets(std::span<const HexCorners> hexes);

/// Places the free vertices at the average of their edge neighbours, with the
/// fixed vertices held, by Jacobi iteration.
void smooth_free_vertices(GeoMesh& mesh, std::span<const std::uint8_t> fixed, std::size_t iterations);

}  // namespace hexenum
