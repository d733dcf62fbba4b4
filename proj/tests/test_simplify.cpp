#include <doctest.h>

#include <numeric>
#include <set>

#include "hexenum/simplify.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace hexenum;

namespace {

GeoMesh grid(std::size_t a, std::size_t b, std::size_t c) { return to_geomesh(gen_grid(a, b, c)); }

bool facet_connected(const GeoMesh& m, const std::vector<std::size_t>& hs) {
  std::set<std::size_t> reached{hs.front()}, todo{hs.front()};
  while (!todo.empty()) {
    const auto h = *todo.begin();
    todo.erase(todo.begin());
    const auto fh = canonicalize_hex(m.hexes[h]).facets();
    for (auto g : hs) {
      if (reached.count(g)) continue;
      const auto fg = canonicalize_hex(m.hexes[g]).facets();
      bool share = false;
      for (const auto& a : fh)
        for (const auto& b : fg) share = share || a == b;
      if (share) {
        reached.insert(g);
        todo.insert(g);
      }
    }
  }
  return reached.size() == hs.size();
}

}  // namespace

TEST_CASE("cavity construction") {
  const auto m = grid(2, 2, 2);
  std::vector<std::size_t> all(8);
  std::iota(all.begin(), all.end(), 0U);
  const auto c = make_cavity(m, all);
  CHECK(c.hexes == all);
  CHECK(c.interior_vertices.size() == 1);
  CHECK(c.boundary_vertices.size() == 26);
  CHECK(c.boundary_facets.size() == 24);
  CHECK(c.vertex_count() == 27);
  CHECK_THROWS_AS(make_cavity(m, {0, 99}), InputError);

  const auto row = grid(3, 1, 1);
  CHECK_THROWS_AS(make_cavity(row, {0, 2}), InputError);
  CHECK_NOTHROW(make_cavity(row, {2, 1}));
}

TEST_CASE("cavity selection is deterministic and connected") {
  const auto m = grid(3, 3, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = select_cavity(m, 8, seed, 0);
    const auto b = select_cavity(m, 8, seed, 0);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(a->hexes == b->hexes);
    CHECK(a->hexes.size() == 8);
    CHECK(facet_connected(m, a->hexes));
  }
  CHECK_FALSE(select_cavity(grid(2, 1, 1), 2, 0, 4));
}

TEST_CASE("tiny cavities are rejected") {
  const auto m = grid(2, 2, 2);
  RemeshOptions o;
  o.min_interior = 0;
  CHECK(remesh_cavity(m, make_cavity(m, {0}), o).status == RemeshStatus::Rejected);
  const auto two = grid(2, 1, 1);
  CHECK(remesh_cavity(two, make_cavity(two, {0, 1}), o).status == RemeshStatus::Rejected);
}

TEST_CASE("hexes outside the cavity constrain the search") {
  const auto slab = gen_grid(2, 1, 1);
  const auto surface = surface_of(slab);
  const Searcher free(surface, {2, 12});
  CHECK(free.run([](const Solution&) { return true; }).solutions == 1);

  // A host hex on the middle facet would be its third user.
  const auto& h = *slab.hexes;
  const std::set<VertexId> a(h[0].begin(), h[0].end()), b(h[1].begin(), h[1].end());
  std::array<std::int64_t, 8> corners{-1, -1, -1, -1, -1, -1, -1, -1};
  for (const auto& f : canonicalize_hex(h[0]).facets())
    if (b.count(f.v[0]) && b.count(f.v[1]) && b.count(f.v[2]) && b.count(f.v[3]))
      for (int c = 0; c < 4; ++c) corners[c] = f.v[c];
  REQUIRE(corners[0] >= 0);
  CHECK(a.size() == 8);
  Searcher blocked(surface, {2, 12});
  blocked.add_external_hex(corners);
  CHECK(blocked.run([](const Solution&) { return true; }).solutions == 0);
}

TEST_CASE("pillowed cube collapses to one hex") {
  const auto pillow = support::pillow_mesh();
  REQUIRE(pillow);
  CHECK(pillow->hexes.size() == 7);
  CHECK(pillow->n_vertices() == 16);
  CHECK(validity(*pillow).valid());
  CHECK_NOTHROW(require_valid_mesh(*pillow));

  std::vector<std::size_t> all(7);
  std::iota(all.begin(), all.end(), 0U);
  const auto cavity = make_cavity(*pillow, all);
  const auto r = remesh_cavity(*pillow, cavity);
  REQUIRE(r.status == RemeshStatus::Replaced);
  REQUIRE(r.replacement);
  CHECK(r.replacement->size() == 1);
  CHECK(r.hex_delta == -6);
  CHECK(r.interior_vertex_delta == -8);

  auto mesh = *pillow;
  std::vector<VertexId> map;
  const auto step = simplify_cavity(mesh, cavity, {}, &map);
  REQUIRE(step);
  CHECK(step->mesh_hexes == 7);
  CHECK(step->cavity_hexes == 7);
  CHECK(step->remeshed_hexes == 1);
  CHECK(step->new_mesh_hexes == 1);
  CHECK(step->new_mesh_vertices == 8);
  CHECK(mesh.hexes.size() == 1);
  CHECK(mesh.n_vertices() == 8);
  CHECK(validity(mesh).valid());
  REQUIRE(map.size() == 16);
  for (VertexId v = 0; v < 8; ++v) {
    CHECK(map[v] == v);
    CHECK(mesh.coords[v] == pillow->coords[v]);
  }
  for (VertexId v = 8; v < 16; ++v) CHECK(map[v] == SimplifyResult::kRemoved);
}

TEST_CASE("simplify drives the pillow to the cube") {
  const auto pillow = support::pillow_mesh();
  REQUIRE(pillow);
  SimplifyConfig c;
  c.cavity_min = 7;
  c.cavity_max = 7;
  c.remesh.min_interior = 4;
  const auto r = simplify(*pillow, c);
  REQUIRE(r.steps.size() == 1);
  CHECK(r.mesh.hexes.size() == 1);
  CHECK(validity(r.mesh).valid());
  // Boundary preserved.
  CHECK(surface_of(from_geomesh(r.mesh)) == surface_of(from_geomesh(*pillow)));

  const auto again = simplify(r.mesh, c);
  CHECK(again.steps.empty());
  CHECK(again.mesh.hexes == r.mesh.hexes);
  CHECK(again.mesh.coords == r.mesh.coords);
}

TEST_CASE("already minimal meshes are left alone") {
  const auto cube = to_geomesh(gen_cube());
  const auto r = simplify(cube);
  CHECK(r.steps.empty());
  CHECK(r.mesh.hexes == cube.hexes);
  CHECK(r.mesh.coords == cube.coords);
  REQUIRE(r.vertex_map.size() == 8);
  for (VertexId v = 0; v < 8; ++v) CHECK(r.vertex_map[v] == v);
}

TEST_CASE("failed steps leave the mesh untouched") {
  const auto m = grid(3, 3, 3);
  std::vector<std::size_t> all(27);
  std::iota(all.begin(), all.end(), 0U);
  const auto cavity = make_cavity(m, all);
  SimplifyConfig c;
  c.remesh.budget_secs = 1e-3;
  auto mesh = m;
  RemeshStatus status = RemeshStatus::Replaced;
  const auto step = simplify_cavity(mesh, cavity, c, nullptr, &status);
  CHECK_FALSE(step);
  CHECK(status == RemeshStatus::BudgetExceeded);
  CHECK(mesh.hexes == m.hexes);
  CHECK(mesh.coords == m.coords);
  CHECK(mesh.is_boundary == m.is_boundary);
}

TEST_CASE("invalid input meshes are refused") {
  auto m = grid(2, 1, 1);
  m.hexes[0] = flipped(m.hexes[0]);
  CHECK_THROWS_AS(require_valid_mesh(m), InputError);
  CHECK_THROWS_AS(simplify(m), InputError);
  auto overlap = grid(2, 1, 1);
  overlap.hexes.push_back(overlap.hexes[0]);
  CHECK_THROWS_AS(require_valid_mesh(overlap), InputError);
}
