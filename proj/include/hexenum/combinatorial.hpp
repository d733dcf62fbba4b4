#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hexenum/vertex_set.hpp"

namespace hexenum {

// ---- errors ----

/// Malformed user input: bad files, invalid surfaces, unsupported limits.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A facet or hexahedron with repeated vertex labels.
class InvalidElementError : public InputError {
 public:
  using InputError::InputError;
};

/// A complex whose facets are used more than twice.
class InvalidComplexError : public InputError {
 public:
  using InputError::InputError;
};

/// Vertex count beyond what the fixed-width bit-sets can index.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- reference hexahedron ----
//
// Corner convention: (0,1,2,3) is a facet in cyclic order and corner 4+i sits
// above corner i.
//
//        7--------6
//       /|       /|
//      4--------5 |
//      | 3------|-2
//      |/       |/
//      0--------1
namespace cube {

enum class PairKind : std::uint8_t { Same, Edge, FaceDiagonal, InteriorDiagonal };

inline constexpr std::array<std::array<int, 2>, 12> kEdges{{
    {0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6}, {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}}};

/// Facets listed with outward orientation for a positively oriented hex.
inline constexpr std::array<std::array<int, 4>, 6> kFacets{{
    {0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4}, {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}}};

inline constexpr std::array<std::array<int, 2>, 4> kInteriorDiagonals{{{0, 6}, {1, 7}, {2, 4}, {3, 5}}};

/// Lookup table of the relation between two corners.
const std::array<std::array<PairKind, 8>, 8>& pair_kinds();

/// The 48 corner permutations preserving the cube's edge structure
/// (rotations and reflections). Entry p maps position k to corner p[k].
const std::array<std::array<std::uint8_t, 8>, 48>& automorphisms();

}  // namespace cube

// ---- facets ----

/// Unoriented quadrilateral, stored as the lexicographic minimum of its 8
/// dihedral reorderings. Diagonals are {v[0],v[2]} and {v[1],v[3]}.
struct CanonicalQuad {
  std::array<VertexId, 4> v{};

  auto operator<=>(const CanonicalQuad&) const = default;
  bool operator==(const CanonicalQuad&) const = default;

  bool contains(VertexId x) const { return v[0] == x || v[1] == x || v[2] == x || v[3] == x; }

  /// Packs the tuple into 28 bits preserving lexicographic order (labels < 128).
  std::uint32_t key() const { return (v[0] << 21) | (v[1] << 14) | (v[2] << 7) | v[3]; }
  static CanonicalQuad from_key(std::uint32_t k) {
    return {{(k >> 21) & 127U, (k >> 14) & 127U, (k >> 7) & 127U, k & 127U}};
  }
};

CanonicalQuad canonicalize_quad(VertexId a, VertexId b, VertexId c, VertexId d);

// ---- hexahedra ----

struct CanonicalHex {
  std::array<VertexId, 8> v{};

  auto operator<=>(const CanonicalHex&) const = default;
  bool operator==(const CanonicalHex&) const = default;

  std::array<CanonicalQuad, 6> facets() const;
  std::array<std::array<VertexId, 2>, 12> edges() const;
  /// Two diagonals per facet, in facet order.
  std::array<std::array<VertexId, 2>, 12> facet_diagonals() const;
  std::array<std::array<VertexId, 2>, 4> interior_diagonals() const;
  VertexSet vertex_set() const;
};

/// Minimum over the 48 cube automorphisms applied to the corner tuple.
CanonicalHex canonicalize_hex(const std::array<VertexId, 8>& v);

/// Two hexes are compatible when they share nothing, or exactly one corner,
/// one edge, or one facet of both.
bool is_compatible(const CanonicalHex& a, const CanonicalHex& b);

// ---- surfaces and complexes ----

/// Closed quadrilateral surface: every edge lies in exactly two quads.
class QuadSurface {
 public:
  QuadSurface() = default;
  /// Throws InputError when the surface is not closed or a quad repeats.
  QuadSurface(std::vector<CanonicalQuad> quads, std::size_t n_vertices);

  /// Skips the closedness check (used for boundaries of arbitrary complexes).
  static QuadSurface unchecked(std::vector<CanonicalQuad> quads, std::size_t n_vertices);

  const std::vector<CanonicalQuad>& quads() const { return quads_; }
  std::size_t n_vertices() const { return n_vertices_; }
  std::size_t size() const { return quads_.size(); }
  bool empty() const { return quads_.empty(); }
  bool has_even_quad_count() const { return quads_.size() % 2 == 0; }
  bool is_closed() const;
  /// Labels referenced by at least one quad.
  std::vector<VertexId> used_vertices() const;

  bool operator==(const QuadSurface&) const = default;

 private:
  std::vector<CanonicalQuad> quads_;  // sorted
  std::size_t n_vertices_ = 0;
};

/// Growing set of hexes with per-facet use counts; a facet used a third time
/// is rejected on insertion.
class HexComplex {
 public:
  HexComplex() = default;
  explicit HexComplex(std::span<const CanonicalHex> hexes);

  void add(const CanonicalHex& h);

  const std::vector<CanonicalHex>& hexes() const { return hexes_; }
  const std::map<CanonicalQuad, int>& quad_use_count() const { return use_; }
  std::size_t size() const { return hexes_.size(); }
  bool empty() const { return hexes_.empty(); }

  /// Every pair of hexes compatible.
  bool pairwise_compatible() const;

 private:
  std::vector<CanonicalHex> hexes_;
  std::map<CanonicalQuad, int> use_;
};

/// Facets used by exactly one hex. n_vertices of the result is one past the
/// largest label in the complex.
QuadSurface boundary_of(const HexComplex& h);

}  // namespace hexenum
