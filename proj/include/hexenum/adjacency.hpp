#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hexenum/combinatorial.hpp"
#include "hexenum/vertex_set.hpp"

namespace hexenum {

enum class FacetState : std::uint8_t { Absent, Open, Closed };

/// Per-vertex neighbourhood bit-sets of the mesh under construction, the quad
/// diagonals (with their partner diagonals), and the open/closed facet table.
/// Every mutation is logged on a trail so a search can roll back to a mark.
///
/// Invariants: all relations are symmetric; known_neighbors(v) and
/// known_diagonals(v) are disjoint; allowed_neighbors(v) excludes v, every
/// quad-diagonal partner of v and every interior-diagonal partner of v.
class AdjacencyState {
 public:
  using Mark = std::size_t;
  using Pair = std::array<VertexId, 2>;

  AdjacencyState() = default;
  /// Throws CapacityError when n_vertices exceeds VertexSet::kCapacity.
  explicit AdjacencyState(std::size_t n_vertices);

  std::size_t n_vertices() const { return n_; }

  const VertexSet& allowed_neighbors(VertexId v) const { return allowed_[v]; }
  const VertexSet& known_neighbors(VertexId v) const { return neighbors_[v]; }
  const VertexSet& known_diagonals(VertexId v) const { return diagonals_[v]; }
  /// Vertices u such that (u, v) is a diagonal of some registered quad.
  const VertexSet& quad_diagonals(VertexId v) const { return quad_diagonals_[v]; }

  bool is_quad_diagonal(VertexId u, VertexId v) const { return quad_diagonals_[u].test(v); }
  /// Other diagonal of the quad whose diagonal is (u, v). nullopt when no quad
  /// built from reachable vertices can have (u, v) as a diagonal.
  std::optional<Pair> quad_diagonal_partner(VertexId u, VertexId v) const;

  FacetState facet_state(const CanonicalQuad& q) const;
  /// Packed keys (CanonicalQuad::key) of the open facets, ascending.
  const std::vector<std::uint32_t>& open_facets() const { return open_; }
  std::size_t closed_facet_count() const { return closed_.size(); }

  void add_edge(VertexId u, VertexId v);
  void add_interior_diagonal(VertexId u, VertexId v);
  /// partner == nullopt records the diagonal as unmatchable.
  void add_quad_diagonal(VertexId u, VertexId v, std::optional<Pair> partner);
  /// Edges and both diagonals of q.
  void add_quad(const CanonicalQuad& q);
  void open_facet(const CanonicalQuad& q);
  void close_facet(const CanonicalQuad& q);

  Mark mark() const { return trail_.size(); }
  void rollback(Mark m);

  /// Hash over every tracked structure; equal states hash equal.
  std::uint64_t fingerprint() const;

 private:
  enum class Op : std::uint8_t { Neighbor, Diagonal, QuadDiagonal, Disallow, Partner, OpenInsert, OpenErase, ClosedInsert };
  struct TrailEntry {
    Op op;
    std::uint8_t a;
    std::uint8_t b;
    std::uint32_t data;
  };

  static constexpr std::uint16_t kNoPartner = 0xFFFF;
  static constexpr std::uint16_t kUnreachable = 0xFFFE;

  void disallow(VertexId u, VertexId v);
  std::uint16_t& partner_slot(VertexId u, VertexId v) { return partner_[u * n_ + v]; }
  std::uint16_t partner_slot(VertexId u, VertexId v) const { return partner_[u * n_ + v]; }
  void set_partner(VertexId u, VertexId v, std::uint16_t code);

  std::size_t n_ = 0;
  std::vector<VertexSet> allowed_, neighbors_, diagonals_, quad_diagonals_;
  std::vector<std::uint16_t> partner_;
  std::vector<std::uint32_t> open_, closed_;
  std::vector<TrailEntry> trail_;
};

/// Seeds the state from a boundary surface: its quads become open facets,
/// their edges known neighbours and their diagonals quad diagonals.
AdjacencyState init_adjacency(const QuadSurface& boundary, std::size_t n_max_vertices);

/// Records the 12 edges, 12 facet diagonals, 4 interior diagonals and 6
/// facets of h. Returns the mark to roll back to. The caller guarantees h
/// passed filtering; reusing a closed facet throws std::logic_error.
AdjacencyState::Mark register_hex(AdjacencyState& state, const CanonicalHex& h);

/// Registers a hex lying outside the region being meshed. corners holds the
/// local label of each corner, or -1 for corners the local search can never
/// use. Only relations between mapped corners are recorded; fully mapped
/// facets that are not already open become closed.
void register_external_hex(AdjacencyState& state, const std::array<std::int64_t, 8>& corners);

/// Candidate vertices for the 8 corners of the hex under construction.
struct CandidateSets {
  std::array<VertexSet, 8> c;

  bool operator==(const CandidateSets&) const = default;
  bool any_empty() const;
  bool all_singletons() const;
};

/// Base corners fixed to the facet; corner 4+i starts from the allowed
/// neighbours of v_i and drops vertices that would put a known edge or known
/// interior diagonal where the new hex has a diagonal, or a quad diagonal
/// where it has an interior diagonal.
CandidateSets initialize_candidates(const AdjacencyState& state, const CanonicalQuad& base);

/// Removes candidates violating the edge/diagonal rules against every fixed
/// corner, the matching-diagonal rule on each facet, distinctness, and reuse
/// of closed facets. Iterates to a fixpoint. Returns false when some set
/// became empty.
bool filter_candidates(const AdjacencyState& state, CandidateSets& c);
CandidateSets filtered(const AdjacencyState& state, CandidateSets c);

}  // namespace hexenum
