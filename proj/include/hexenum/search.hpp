#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hexenum/adjacency.hpp"
#include "hexenum/combinatorial.hpp"

namespace hexenum {

struct SearchLimits {
  std::size_t max_hexes = 0;
  /// Total vertex count, boundary vertices included.
  std::size_t max_vertices = 0;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t backtracks = 0;
  std::uint64_t solutions = 0;
  double seconds = 0.0;
  /// Deadline or cancellation cut the run short; counts are incomplete.
  bool aborted = false;
  /// A sink asked to stop.
  bool stopped = false;

  SearchStats& operator+=(const SearchStats& o);
};

struct Solution {
  /// Hexes in construction order.
  std::vector<CanonicalHex> hexes;
  std::size_t n_vertices = 0;
};

/// Receives each solution; returning false stops the search.
using SolutionSink = std::function<bool(const Solution&)>;

/// One branching choice: corner slot (0..7) fixed to a vertex.
struct Decision {
  std::uint8_t slot = 0;
  VertexId value = 0;
  bool operator==(const Decision&) const = default;
};

struct SearchOptions {
  /// Value-precedence on interior labels. Disabling it is a test hook: every
  /// relabelling of a solution is then emitted.
  bool symmetry_breaking = true;
  /// Re-check each closed hex and each solution against the brute-force
  /// definitions; a violation throws std::logic_error.
  bool verify = false;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  const std::atomic<bool>* cancel = nullptr;
};

/// Index (0-based) of the slot with the fewest candidates among slots holding
/// more than one; ties go to the lowest index. Returns 8 when every slot is a
/// singleton.
std::size_t pick_hex_vertex(const CandidateSets& c);

/// Keeps used labels (< next_fresh) and at most the single unused label
/// next_fresh, which is dropped when it would exceed the vertex limit.
CandidateSets apply_precedence(const CandidateSets& c, VertexId next_fresh, std::size_t max_vertices);

/// Lexicographically smallest open facet. Throws std::logic_error on an empty front.
CanonicalQuad select_front_facet(const AdjacencyState& state);

/// Advancing-front enumeration of every hex mesh bounded by a quad surface.
/// A Searcher is a reusable, copyable description of one search problem;
/// each run starts from the same root state.
class Searcher {
 public:
  /// Throws InputError for open or odd surfaces and limits below the
  /// boundary vertex count, CapacityError past the bit-set width.
  Searcher(QuadSurface boundary, SearchLimits limits, SearchOptions options = {});

  /// Constrains the search with a hex that lies outside the meshed region
  /// (see register_external_hex). Must be called before running.
  void add_external_hex(const std::array<std::int64_t, 8>& corners);

  SearchStats run(const SolutionSink& sink) const;
  /// Explores only the subtree reached by replaying prefix from the root.
  SearchStats run_subtree(std::span<const Decision> prefix, const SolutionSink& sink) const;
  /// Explores the tree down to `depth` branching decisions, appending the
  /// decision path of every branching node met at that depth to frontier.
  /// Solutions above that depth go to sink.
  SearchStats collect_frontier(std::size_t depth, std::vector<std::vector<Decision>>& frontier,
                               const SolutionSink& sink) const;

  const QuadSurface& boundary() const { return boundary_; }
  const SearchLimits& limits() const { return limits_; }
  const SearchOptions& options() const { return options_; }
  void set_options(const SearchOptions& o) { options_ = o; }
  const AdjacencyState& root_state() const { return root_; }

 private:
  class Run;

  QuadSurface boundary_;
  SearchLimits limits_;
  SearchOptions options_;
  AdjacencyState root_;
  std::vector<CanonicalHex> externals_;  // kept only for verification
};

SearchStats search(const QuadSurface& boundary, SearchLimits limits, const SolutionSink& sink,
                   SearchOptions options = {});

/// Sorted canonical hexes with interior labels (>= n_boundary) renamed to
/// minimise the result; identical for relabelled or reordered solutions.
std::vector<CanonicalHex> canonical_solution(std::span<const CanonicalHex> hexes, std::size_t n_boundary);

}  // namespace hexenum
