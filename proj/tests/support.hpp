#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "hexenum/generators.hpp"
#include "hexenum/parallel.hpp"
#include "hexenum/search.hpp"
#include "oracle.hpp"

namespace support {

using hexenum::CanonicalHex;
using hexenum::CanonicalQuad;
using hexenum::QuadSurface;
using hexenum::VertexId;

inline QuadSurface to_surface(const std::vector<oracle::Quad>& quads) {
  std::vector<CanonicalQuad> cq;
  std::size_t n = 0;
  for (const auto& q : quads) {
    cq.push_back(hexenum::canonicalize_quad(q[0], q[1], q[2], q[3]));
    for (auto v : q) n = std::max<std::size_t>(n, v + 1);
  }
  return QuadSurface(std::move(cq), n);
}

inline std::vector<oracle::Quad> cube_quads() {
  const auto f = hexenum::gen_cube();
  return {f.quads->begin(), f.quads->end()};
}

inline std::vector<oracle::Quad> grid_quads(std::size_t a, std::size_t b, std::size_t c) {
  const auto f = hexenum::gen_grid(a, b, c);
  return {f.quads->begin(), f.quads->end()};
}

/// Splits vertex v along two of its edges, adding a vertex and a quad.
/// Faces are oriented cycles; returns nullopt when the result is not a
/// consistently oriented closed surface without repeated quads.
inline std::optional<std::vector<oracle::Quad>> split_vertex(const std::vector<oracle::Quad>& faces, std::uint32_t v,
                                                             std::size_t i, std::size_t j) {
  // Neighbours of v in rotation order, and the face following each.
  std::map<std::uint32_t, std::pair<std::uint32_t, std::size_t>> next_of;  // prev -> (next, face)
  for (std::size_t f = 0; f < faces.size(); ++f)
    for (int k = 0; k < 4; ++k)
      if (faces[f][k] == v) next_of[faces[f][(k + 3) % 4]] = {faces[f][(k + 1) % 4], f};
  if (next_of.size() < 2) return std::nullopt;
  std::vector<std::uint32_t> ring{next_of.begin()->first};
  std::vector<std::size_t> ring_faces;
  while (true) {
    const auto it = next_of.find(ring.back());
    if (it == next_of.end()) return std::nullopt;
    ring_faces.push_back(it->second.second);
    if (it->second.first == ring.front()) break;
    ring.push_back(it->second.first);
    if (ring.size() > next_of.size()) return std::nullopt;
  }
  const std::size_t d = ring.size();
  i %= d;
  j %= d;
  if (i == j) return std::nullopt;
  if (i > j) std::swap(i, j);
  std::uint32_t n = 0;
  for (const auto& q : faces)
    for (auto x : q) n = std::max(n, x + 1);
  const std::uint32_t w = n;
  std::vector<oracle::Quad> out = faces;
  // Faces between ring[i] and ring[j] move to the new vertex.
  for (std::size_t k = i; k < j; ++k)
    for (auto& x : out[ring_faces[k]])
      if (x == v) x = w;
  // Oriented so that each shared edge is traversed in opposite directions.
  out.push_back({v, ring[i], w, ring[j]});
  std::set<std::pair<std::uint32_t, std::uint32_t>> directed;
  bool ok = true;
  for (const auto& q : out)
    for (int k = 0; k < 4; ++k) ok = ok && directed.insert({q[k], q[(k + 1) % 4]}).second;
  if (!ok) {
    std::swap(out.back()[1], out.back()[3]);
    directed.clear();
    ok = true;
    for (const auto& q : out)
      for (int k = 0; k < 4; ++k) ok = ok && directed.insert({q[k], q[(k + 1) % 4]}).second;
  }
  if (!ok) return std::nullopt;
  for (const auto& [a, b] : directed)
    if (!directed.count({b, a})) return std::nullopt;
  std::set<oracle::Quad> canon;
  for (const auto& q : out)
    if (!canon.insert(oracle::canonical_quad(q)).second) return std::nullopt;
  return out;
}

/// Cube surface after `splits` random vertex splits, randomly relabelled.
inline std::vector<oracle::Quad> random_surface(std::mt19937_64& rng, int splits) {
  for (;;) {
    std::vector<oracle::Quad> s = cube_quads();
    bool ok = true;
    for (int k = 0; k < splits && ok; ++k) {
      std::uint32_t n = 0;
      for (const auto& q : s)
        for (auto x : q) n = std::max(n, x + 1);
      auto r = split_vertex(s, static_cast<std::uint32_t>(rng() % n), rng() % 8, rng() % 8);
      if (!r) {
        ok = false;
        break;
      }
      s = *r;
    }
    if (!ok) continue;
    std::uint32_t n = 0;
    for (const auto& q : s)
      for (auto x : q) n = std::max(n, x + 1);
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0U);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (auto& q : s)
      for (auto& x : q) x = perm[x];
    return s;
  }
}

inline oracle::Hex to_oracle(const CanonicalHex& h) {
  oracle::Hex o;
  std::copy(h.v.begin(), h.v.end(), o.begin());
  return o;
}

/// Canonical forms (computed by the oracle) of every solution the engine
/// emits. With relabel off, only hex order is normalised, which keeps large
/// interior vertex counts cheap.
struct EngineRun {
  std::multiset<oracle::Mesh> raw;
  std::set<oracle::Mesh> unique;
  hexenum::SearchStats stats;
};

inline EngineRun run_engine(const QuadSurface& s, hexenum::SearchLimits limits, hexenum::SearchOptions opts = {},
                            std::size_t threads = 1, std::size_t per_thread = hexenum::kDefaultSubtreesPerThread,
                            bool relabel = true) {
  EngineRun r;
  const hexenum::Searcher searcher(s, limits, opts);
  auto sink = [&](const hexenum::Solution& sol) {
    oracle::Mesh m;
    for (const auto& h : sol.hexes) m.push_back(to_oracle(h));
    oracle::Mesh c;
    if (relabel) {
      c = oracle::canonical_mesh(m, static_cast<std::uint32_t>(s.n_vertices()));
    } else {
      for (const auto& h : m) c.push_back(oracle::canonical_hex(h));
      std::sort(c.begin(), c.end());
    }
    r.raw.insert(c);
    r.unique.insert(c);
    return true;
  };
  if (threads <= 1) {
    r.stats = searcher.run(sink);
  } else {
    r.stats = hexenum::run_parallel(hexenum::split(searcher, threads, per_thread), threads, sink);
  }
  return r;
}

/// Cube subdivided into an inner hex and six hexes around it, found by the
/// search and embedded by smoothing and untangling. Empty on failure.
inline std::optional<hexenum::GeoMesh> pillow_mesh() {
  const auto cube = hexenum::gen_cube();
  const hexenum::Searcher s(hexenum::surface_of(cube), {7, 16});
  std::optional<hexenum::Solution> pick;
  s.run([&](const hexenum::Solution& sol) {
    if (sol.hexes.size() != 7) return true;
    pick = sol;
    return false;
  });
  if (!pick) return std::nullopt;
  std::map<CanonicalQuad, std::array<VertexId, 4>> seeds;
  for (const auto& q : *cube.quads) seeds[hexenum::canonicalize_quad(q[0], q[1], q[2], q[3])] = q;
  const auto oriented = hexenum::orient_hexes(pick->hexes, seeds);
  if (!oriented) return std::nullopt;
  hexenum::GeoMesh m;
  m.coords = cube.coords;
  m.coords.resize(pick->n_vertices, hexenum::Vec3{0.5, 0.5, 0.5});
  m.hexes = *oriented;
  m.refresh_boundary_flags();
  const auto fixed = m.is_boundary;
  hexenum::smooth_free_vertices(m, fixed, 50);
  if (!hexenum::untangle(m, fixed).success) return std::nullopt;
  return m;
}

}  // namespace support
