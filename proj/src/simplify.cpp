#include "hexenum/simplify.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <random>
#include <set>

#include "hexenum/parallel.hpp"

namespace hexenum {

namespace {

using Clock = std::chrono::steady_clock;

/// Facet-neighbour lists of the hexes of a mesh.
std::vector<std::vector<std::size_t>> facet_neighbors(const GeoMesh& mesh) {
  std::map<CanonicalQuad, std::vector<std::size_t>> by_facet;
  for (std::size_t h = 0; h < mesh.hexes.size(); ++h)
    for (const auto& f : canonicalize_hex(mesh.hexes[h]).facets()) by_facet[f].push_back(h);
  std::vector<std::vector<std::size_t>> nbrs(mesh.hexes.size());
  for (const auto& [f, hs] : by_facet)
    for (auto a : hs)
      for (auto b : hs)
        if (a != b) nbrs[a].push_back(b);
  for (auto& n : nbrs) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
  return nbrs;
}

Vec3 centroid(const GeoMesh& mesh, const std::vector<VertexId>& vs) {
  Vec3 c{0, 0, 0};
  for (auto v : vs)
    for (int a = 0; a < 3; ++a) c[a] += mesh.coords[v][a];
  for (auto& x : c) x /= static_cast<double>(std::max<std::size_t>(1, vs.size()));
  return c;
}

}  // namespace

Cavity make_cavity(const GeoMesh& mesh, std::vector<std::size_t> hexes) {
  std::sort(hexes.begin(), hexes.end());
  hexes.erase(std::unique(hexes.begin(), hexes.end()), hexes.end());
  if (hexes.empty()) throw InputError("empty cavity");
  for (auto h : hexes)
    if (h >= mesh.hexes.size()) throw InputError("cavity hex index out of range");

  std::vector<HexCorners> corners;
  for (auto h : hexes) corners.push_back(mesh.hexes[h]);

  // Facet connectivity.
  std::map<CanonicalQuad, std::vector<std::size_t>> by_facet;
  for (std::size_t i = 0; i < corners.size(); ++i)
    for (const auto& f : canonicalize_hex(corners[i]).facets()) by_facet[f].push_back(i);
  std::vector<char> seen(corners.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (const auto& f : canonicalize_hex(corners[i]).facets())
      for (auto j : by_facet[f])
        if (!seen[j]) {
          seen[j] = 1;
          ++reached;
          stack.push_back(j);
        }
  }
  if (reached != corners.size()) throw InputError("cavity hexes are not facet-connected");

  Cavity c;
  c.hexes = std::move(hexes);
  c.boundary_facets = outward_boundary_facets(corners);
  std::set<VertexId> bnd, all;
  for (const auto& [k, q] : c.boundary_facets) bnd.insert(q.begin(), q.end());
  for (const auto& h : corners) all.insert(h.begin(), h.end());
  c.boundary_vertices.assign(bnd.begin(), bnd.end());
  for (auto v : all)
    if (!bnd.count(v)) c.interior_vertices.push_back(v);
  return c;
}

std::optional<Cavity> select_cavity(const GeoMesh& mesh, std::size_t n, std::uint64_t seed, std::size_t min_interior,
                                    std::size_t max_retries) {
  if (n == 0 || n > mesh.hexes.size()) return std::nullopt;
  const auto nbrs = facet_neighbors(mesh);
  std::mt19937_64 rng(seed);
  for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
    std::vector<std::size_t> chosen{std::uniform_int_distribution<std::size_t>(0, mesh.hexes.size() - 1)(rng)};
    std::set<std::size_t> in{chosen.front()};
    while (chosen.size() < n) {
      std::set<std::size_t> frontier;
      for (auto h : chosen)
        for (auto g : nbrs[h])
          if (!in.count(g)) frontier.insert(g);
      if (frontier.empty()) break;
      auto it = frontier.begin();
      std::advance(it, std::uniform_int_distribution<std::size_t>(0, frontier.size() - 1)(rng));
      chosen.push_back(*it);
      in.insert(*it);
    }
    if (chosen.size() < n) continue;
    Cavity c = make_cavity(mesh, chosen);
    if (c.interior_vertices.size() >= min_interior) return c;
  }
  return std::nullopt;
}

RemeshOutcome remesh_cavity(const GeoMesh& mesh, const Cavity& cavity, const RemeshOptions& options) {
  RemeshOutcome out;
  const std::size_t n_b = cavity.boundary_vertices.size();
  const std::size_t interior = cavity.interior_vertices.size();
  if (interior < std::max<std::size_t>(1, options.min_interior) || cavity.hexes.size() < 3 ||
      n_b > VertexSet::kCapacity)
    return out;
  const SearchLimits limits{cavity.hexes.size() - 2, std::min(n_b + interior - 1, VertexSet::kCapacity)};

  std::vector<std::int64_t> local(mesh.n_vertices(), -1);
  for (std::size_t i = 0; i < n_b; ++i) local[cavity.boundary_vertices[i]] = static_cast<std::int64_t>(i);
  std::vector<CanonicalQuad> quads;
  for (const auto& [k, q] : cavity.boundary_facets)
    quads.push_back(canonicalize_quad(static_cast<VertexId>(local[q[0]]), static_cast<VertexId>(local[q[1]]),
                                      static_cast<VertexId>(local[q[2]]), static_cast<VertexId>(local[q[3]])));
  QuadSurface surface;
  try {
    surface = QuadSurface(std::move(quads), n_b);
  } catch (const InputError&) {
    // Non-manifold cavity boundary.
    return out;
  }

  SearchOptions so;
  so.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(options.budget_secs));
  so.cancel = options.cancel;
  Searcher searcher(surface, limits, so);
  std::vector<char> in_cavity(mesh.hexes.size(), 0);
  for (auto h : cavity.hexes) in_cavity[h] = 1;
  for (std::size_t h = 0; h < mesh.hexes.size(); ++h) {
    if (in_cavity[h]) continue;
    std::array<std::int64_t, 8> corners;
    int mapped = 0;
    for (int k = 0; k < 8; ++k) {
      corners[k] = local[mesh.hexes[h][k]];
      mapped += corners[k] >= 0;
    }
    if (mapped >= 2) searcher.add_external_hex(corners);
  }

  std::optional<Solution> best;
  const SolutionSink sink = [&](const Solution& s) {
    if (!best || s.hexes.size() < best->hexes.size() ||
        (s.hexes.size() == best->hexes.size() && s.n_vertices < best->n_vertices))
      best = s;
    return options.exhaustive;
  };
  out.stats = options.threads > 1 ? parallel_search(searcher, options.threads, sink) : searcher.run(sink);

  if (!best) {
    out.status = out.stats.aborted ? RemeshStatus::BudgetExceeded : RemeshStatus::NoSmallerMesh;
    return out;
  }
  std::set<VertexId> fresh;
  for (const auto& h : best->hexes)
    for (auto v : h.v)
      if (v >= n_b) fresh.insert(v);
  const std::vector<VertexId> fresh_sorted(fresh.begin(), fresh.end());
  std::vector<CanonicalHex> replacement;
  for (const auto& h : best->hexes) {
    std::array<VertexId, 8> g;
    for (int k = 0; k < 8; ++k) {
      const VertexId v = h.v[k];
      if (v < n_b) {
        g[k] = cavity.boundary_vertices[v];
      } else {
        const auto rank = std::lower_bound(fresh_sorted.begin(), fresh_sorted.end(), v) - fresh_sorted.begin();
        g[k] = static_cast<VertexId>(mesh.n_vertices() + static_cast<std::size_t>(rank));
      }
    }
    replacement.push_back(canonicalize_hex(g));
  }
  out.status = RemeshStatus::Replaced;
  out.new_interior_vertices = fresh.size();
  out.hex_delta = static_cast<std::ptrdiff_t>(replacement.size()) - static_cast<std::ptrdiff_t>(cavity.hexes.size());
  out.interior_vertex_delta = static_cast<std::ptrdiff_t>(fresh.size()) - static_cast<std::ptrdiff_t>(interior);
  out.replacement = std::move(replacement);
  return out;
}

void require_valid_mesh(const GeoMesh& mesh, std::size_t samples_per_axis) {
  for (const auto& h : mesh.hexes)
    for (auto v : h)
      if (v >= mesh.n_vertices()) throw InputError("hex references an undeclared vertex");
  const HexComplex complex = mesh.complex();
  std::vector<std::vector<std::size_t>> incident(mesh.n_vertices());
  for (std::size_t h = 0; h < complex.size(); ++h)
    for (auto v : complex.hexes()[h].v) incident[v].push_back(h);
  std::set<std::pair<std::size_t, std::size_t>> checked;
  for (const auto& hs : incident)
    for (std::size_t i = 0; i < hs.size(); ++i)
      for (std::size_t j = i + 1; j < hs.size(); ++j)
        if (checked.insert({hs[i], hs[j]}).second && !is_compatible(complex.hexes()[hs[i]], complex.hexes()[hs[j]]))
          throw InputError("hexes " + std::to_string(hs[i]) + " and " + std::to_string(hs[j]) +
                           " do not meet in a common face");
  const ValidityReport r = validity(mesh, samples_per_axis);
  if (!r.valid())
    throw InputError("mesh has " + std::to_string(r.invalid_hexes.size()) +
                     " hexes with non-positive sampled Jacobian");
}

std::optional<StepRecord> simplify_cavity(GeoMesh& mesh, const Cavity& cavity, const SimplifyConfig& config,
                                          std::vector<VertexId>* vertex_map, RemeshStatus* status) {
  const RemeshOutcome outcome = remesh_cavity(mesh, cavity, config.remesh);
  if (status) *status = outcome.status;
  if (!outcome.replacement) return std::nullopt;
  const auto oriented = orient_hexes(*outcome.replacement, cavity.boundary_facets);
  if (!oriented) return std::nullopt;

  // Assemble the new connectivity, then drop the old interior vertices.
  const std::size_t n_old = mesh.n_vertices();
  GeoMesh cand;
  cand.coords = mesh.coords;
  const Vec3 center = centroid(mesh, cavity.boundary_vertices);
  cand.coords.resize(n_old + outcome.new_interior_vertices, center);
  std::vector<char> in_cavity(mesh.hexes.size(), 0);
  for (auto h : cavity.hexes) in_cavity[h] = 1;
  for (std::size_t h = 0; h < mesh.hexes.size(); ++h)
    if (!in_cavity[h]) cand.hexes.push_back(mesh.hexes[h]);
  cand.hexes.insert(cand.hexes.end(), oriented->begin(), oriented->end());

  std::vector<char> removed(cand.coords.size(), 0);
  for (auto v : cavity.interior_vertices) removed[v] = 1;
  std::vector<VertexId> map(cand.coords.size(), SimplifyResult::kRemoved);
  std::vector<Vec3> coords;
  for (VertexId v = 0; v < cand.coords.size(); ++v)
    if (!removed[v]) {
      map[v] = static_cast<VertexId>(coords.size());
      coords.push_back(cand.coords[v]);
    }
  cand.coords = std::move(coords);
  for (auto& h : cand.hexes)
    for (auto& v : h) v = map[v];
  cand.refresh_boundary_flags();

  std::vector<std::uint8_t> is_new(cand.coords.size(), 0);
  for (std::size_t k = 0; k < outcome.new_interior_vertices; ++k) is_new[map[n_old + k]] = 1;
  const std::vector<Vec3> start = cand.coords;

  bool ok = untangle(cand, cand.is_boundary, config.untangle).success;
  if (!ok) {
    cand.coords = start;
    std::vector<std::uint8_t> hold(cand.coords.size());
    for (std::size_t v = 0; v < hold.size(); ++v) hold[v] = is_new[v] ? 0 : 1;
    smooth_free_vertices(cand, hold, 100);
    ok = untangle(cand, cand.is_boundary, config.untangle).success;
  }
  if (!ok || !validity(cand, config.untangle.samples_per_axis).valid()) return std::nullopt;

  StepRecord rec;
  rec.mesh_hexes = mesh.hexes.size();
  rec.mesh_vertices = n_old;
  rec.cavity_hexes = cavity.hexes.size();
  rec.cavity_vertices = cavity.vertex_count();
  rec.cavity_boundary_facets = cavity.boundary_facets.size();
  rec.remeshed_hexes = outcome.replacement->size();
  rec.remeshed_vertices = cavity.boundary_vertices.size() + outcome.new_interior_vertices;
  rec.new_mesh_hexes = cand.hexes.size();
  rec.new_mesh_vertices = cand.coords.size();
  mesh = std::move(cand);
  if (vertex_map) {
    map.resize(n_old);
    *vertex_map = std::move(map);
  }
  return rec;
}

SimplifyResult simplify(const GeoMesh& input, const SimplifyConfig& config) {
  require_valid_mesh(input, config.untangle.samples_per_axis);
  SimplifyResult result;
  result.mesh = input;
  result.mesh.refresh_boundary_flags();
  result.vertex_map.resize(input.n_vertices());
  for (VertexId v = 0; v < input.n_vertices(); ++v) result.vertex_map[v] = v;

  const auto t0 = Clock::now();
  auto out_of_time = [&] {
    return config.total_budget_secs > 0 &&
           std::chrono::duration<double>(Clock::now() - t0).count() >= config.total_budget_secs;
  };
  std::mt19937_64 rng(config.seed);
  const std::size_t lo = std::max<std::size_t>(1, config.cavity_min);
  std::size_t size = lo;

  while (size <= std::max(lo, config.cavity_max)) {
    if (config.max_steps && result.steps.size() >= config.max_steps) break;
    const std::size_t n = std::min(size, result.mesh.hexes.size());
    bool improved = false;
    for (std::size_t t = 0; t < config.tries_per_size && !improved; ++t) {
      if (out_of_time()) {
        result.budget_exhausted = true;
        return result;
      }
      const auto cavity = select_cavity(result.mesh, n, rng(), config.remesh.min_interior);
      if (!cavity) break;
      ++result.cavities_tried;
      std::vector<VertexId> step_map;
      RemeshStatus status = RemeshStatus::Rejected;
      const auto rec = simplify_cavity(result.mesh, *cavity, config, &step_map, &status);
      if (status == RemeshStatus::BudgetExceeded) ++result.remesh_timeouts;
      if (!rec) {
        if (status == RemeshStatus::Replaced) ++result.untangle_failures;
        continue;
      }
      result.steps.push_back(*rec);
      for (auto& v : result.vertex_map)
        if (v != SimplifyResult::kRemoved) v = step_map[v];
      improved = true;
    }
    if (improved) {
      size = lo;
    } else {
      if (n == result.mesh.hexes.size()) break;
      size += 2;
    }
  }
  return result;
}

}  // namespace hexenum
