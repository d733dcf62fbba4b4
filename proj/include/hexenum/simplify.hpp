#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hexenum/geometry.hpp"
#include "hexenum/search.hpp"

namespace hexenum {

/// Facet-connected set of hexes of a mesh.
struct Cavity {
  /// Indices into GeoMesh::hexes, ascending.
  std::vector<std::size_t> hexes;
  /// Vertices of cavity hexes lying on no cavity boundary facet.
  std::vector<VertexId> interior_vertices;
  /// Vertices of the cavity boundary facets, ascending.
  std::vector<VertexId> boundary_vertices;
  /// Facets used by exactly one cavity hex, oriented out of the cavity.
  std::map<CanonicalQuad, std::array<VertexId, 4>> boundary_facets;

  std::size_t vertex_count() const { return interior_vertices.size() + boundary_vertices.size(); }
};

/// Builds the cavity made of the given hexes. Throws InputError when they are
/// not facet-connected or an index is out of range.
Cavity make_cavity(const GeoMesh& mesh, std::vector<std::size_t> hexes);

/// Greedy growth from a random seed hex, adding a random facet neighbour
/// until n hexes are reached. Seeds whose cavity has fewer than
/// min_interior interior vertices are retried, max_retries times in all.
std::optional<Cavity> select_cavity(const GeoMesh& mesh, std::size_t n, std::uint64_t seed,
                                    std::size_t min_interior = 4, std::size_t max_retries = 32);

struct RemeshOptions {
  /// Keep searching for the smallest replacement instead of the first.
  bool exhaustive = false;
  double budget_secs = 30.0;
  std::size_t threads = 1;
  std::size_t min_interior = 4;
  const std::atomic<bool>* cancel = nullptr;
};

enum class RemeshStatus { Replaced, NoSmallerMesh, BudgetExceeded, Rejected };

struct RemeshOutcome {
  RemeshStatus status = RemeshStatus::Rejected;
  /// Replacement hexes in mesh labels; new interior vertices are numbered
  /// from mesh.n_vertices() upward.
  std::optional<std::vector<CanonicalHex>> replacement;
  std::size_t new_interior_vertices = 0;
  std::ptrdiff_t hex_delta = 0;
  std::ptrdiff_t interior_vertex_delta = 0;
  SearchStats stats;
};

/// Searches for a mesh of the cavity boundary with at most |cavity| - 2 hexes
/// and fewer interior vertices, compatible with every hex outside the cavity.
RemeshOutcome remesh_cavity(const GeoMesh& mesh, const Cavity& cavity, const RemeshOptions& options = {});

/// One accepted replacement, in the columns of a remeshing log.
struct StepRecord {
  std::size_t mesh_hexes = 0, mesh_vertices = 0;
  std::size_t cavity_hexes = 0, cavity_vertices = 0, cavity_boundary_facets = 0;
  std::size_t remeshed_hexes = 0, remeshed_vertices = 0;
  std::size_t new_mesh_hexes = 0, new_mesh_vertices = 0;
};

struct SimplifyConfig {
  std::size_t cavity_min = 6;
  std::size_t cavity_max = 18;
  /// Cavities tried at each size before moving to the next size.
  std::size_t tries_per_size = 8;
  std::uint64_t seed = 0;
  RemeshOptions remesh;
  UntangleOptions untangle;
  /// Whole-run wall-clock limit; 0 disables it.
  double total_budget_secs = 0.0;
  /// 0 means no limit.
  std::size_t max_steps = 0;
};

struct SimplifyResult {
  GeoMesh mesh;
  std::vector<StepRecord> steps;
  /// Old vertex label to new label, or kRemoved.
  std::vector<VertexId> vertex_map;
  std::size_t cavities_tried = 0;
  std::size_t remesh_timeouts = 0;
  std::size_t untangle_failures = 0;
  bool budget_exhausted = false;

  static constexpr VertexId kRemoved = ~VertexId{0};
};

/// Throws InputError unless every facet is used at most twice, all hex pairs
/// are compatible and the sampled Jacobians are positive.
void require_valid_mesh(const GeoMesh& mesh, std::size_t samples_per_axis = 3);

/// Replaces the cavity with a smaller mesh and untangles. On success mesh is
/// updated (vertex labels compacted, map returned through vertex_map) and a
/// record is returned; otherwise mesh is left untouched.
std::optional<StepRecord> simplify_cavity(GeoMesh& mesh, const Cavity& cavity, const SimplifyConfig& config,
                                          std::vector<VertexId>* vertex_map = nullptr,
                                          RemeshStatus* status = nullptr);

/// Repeated cavity selection, remeshing and untangling. Cavity sizes run from
/// cavity_min to cavity_max in steps of 2 and fall back to cavity_min after
/// each accepted replacement.
SimplifyResult simplify(const GeoMesh& mesh, const SimplifyConfig& config = {});

}  // namespace hexenum
