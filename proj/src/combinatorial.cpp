#include "hexenum/combinatorial.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

namespace hexenum {

namespace cube {

const std::array<std::array<PairKind, 8>, 8>& pair_kinds() {
  static const auto table = [] {
    std::array<std::array<PairKind, 8>, 8> t{};
    for (auto& row : t) row.fill(PairKind::FaceDiagonal);
    for (int i = 0; i < 8; ++i) t[i][i] = PairKind::Same;
    for (auto [a, b] : kEdges) t[a][b] = t[b][a] = PairKind::Edge;
    for (auto [a, b] : kInteriorDiagonals) t[a][b] = t[b][a] = PairKind::InteriorDiagonal;
    return t;
  }();
  return table;
}

const std::array<std::array<std::uint8_t, 8>, 48>& automorphisms() {
  static const auto table = [] {
    std::array<std::array<std::uint8_t, 8>, 48> out{};
    const auto& kinds = pair_kinds();
    std::array<std::uint8_t, 8> p;
    std::iota(p.begin(), p.end(), std::uint8_t{0});
    std::size_t n = 0;
    do {
      bool ok = true;
      for (auto [a, b] : kEdges) {
        if (kinds[p[a]][p[b]] != PairKind::Edge) {
          ok = false;
          break;
        }
      }
      if (ok) out.at(n++) = p;
    } while (std::next_permutation(p.begin(), p.end()));
    if (n != out.size()) throw std::logic_error("cube automorphism group has wrong order");
    return out;
  }();
  return table;
}

}  // namespace cube

CanonicalQuad canonicalize_quad(VertexId a, VertexId b, VertexId c, VertexId d) {
  if (a == b || a == c || a == d || b == c || b == d || c == d)
    throw InvalidElementError("quad has repeated vertex labels");
  const std::array<VertexId, 4> q{a, b, c, d};
  std::size_t start = 0;
  for (std::size_t i = 1; i < 4; ++i)
    if (q[i] < q[start]) start = i;
  const VertexId next = q[(start + 1) % 4];
  const VertexId prev = q[(start + 3) % 4];
  CanonicalQuad out;
  for (std::size_t k = 0; k < 4; ++k)
    out.v[k] = next < prev ? q[(start + k) % 4] : q[(start + 4 - k) % 4];
  return out;
}

std::array<CanonicalQuad, 6> CanonicalHex::facets() const {
  std::array<CanonicalQuad, 6> out;
  for (std::size_t f = 0; f < 6; ++f) {
    const auto& c = cube::kFacets[f];
    out[f] = canonicalize_quad(v[c[0]], v[c[1]], v[c[2]], v[c[3]]);
  }
  return out;
}

std::array<std::array<VertexId, 2>, 12> CanonicalHex::edges() const {
  std::array<std::array<VertexId, 2>, 12> out;
  for (std::size_t e = 0; e < 12; ++e) out[e] = {v[cube::kEdges[e][0]], v[cube::kEdges[e][1]]};
  return out;
}

std::array<std::array<VertexId, 2>, 12> CanonicalHex::facet_diagonals() const {
  std::array<std::array<VertexId, 2>, 12> out;
  for (std::size_t f = 0; f < 6; ++f) {
    const auto& c = cube::kFacets[f];
    out[2 * f] = {v[c[0]], v[c[2]]};
    out[2 * f + 1] = {v[c[1]], v[c[3]]};
  }
  return out;
}

std::array<std::array<VertexId, 2>, 4> CanonicalHex::interior_diagonals() const {
  std::array<std::array<VertexId, 2>, 4> out;
  for (std::size_t d = 0; d < 4; ++d)
    out[d] = {v[cube::kInteriorDiagonals[d][0]], v[cube::kInteriorDiagonals[d][1]]};
  return out;
}

VertexSet CanonicalHex::vertex_set() const {
  VertexSet s;
  for (auto x : v) s.set(x);
  return s;
}

CanonicalHex canonicalize_hex(const std::array<VertexId, 8>& v) {
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j)
      if (v[i] == v[j]) throw InvalidElementError("hexahedron has repeated vertex labels");
  CanonicalHex best{v};
  for (const auto& p : cube::automorphisms()) {
    CanonicalHex img;
    for (std::size_t k = 0; k < 8; ++k) img.v[k] = v[p[k]];
    if (img < best) best = img;
  }
  return best;
}

bool is_compatible(const CanonicalHex& a, const CanonicalHex& b) {
  std::array<int, 8> pos_a{}, pos_b{};
  int shared = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (a.v[i] == b.v[j]) {
        pos_a[shared] = i;
        pos_b[shared] = j;
        ++shared;
      }
  switch (shared) {
    case 0:
    case 1:
      return true;
    case 2: {
      const auto& k = cube::pair_kinds();
      return k[pos_a[0]][pos_a[1]] == cube::PairKind::Edge && k[pos_b[0]][pos_b[1]] == cube::PairKind::Edge;
    }
    case 4: {
      // The four shared labels must be the same quad (same cyclic order) in both.
      const auto fa = a.facets();
      const auto fb = b.facets();
      for (const auto& qa : fa) {
        if (!qa.contains(a.v[pos_a[0]]) || !qa.contains(a.v[pos_a[1]]) || !qa.contains(a.v[pos_a[2]]) ||
            !qa.contains(a.v[pos_a[3]]))
          continue;
        return std::find(fb.begin(), fb.end(), qa) != fb.end();
      }
      return false;
    }
    default:
      return false;
  }
}

// ---- QuadSurface ----

namespace {

std::size_t count_edge_uses(const std::vector<CanonicalQuad>& quads, bool& closed) {
  std::map<std::pair<VertexId, VertexId>, int> uses;
  for (const auto& q : quads)
    for (int i = 0; i < 4; ++i) {
      VertexId a = q.v[i], b = q.v[(i + 1) % 4];
      if (a > b) std::swap(a, b);
      ++uses[{a, b}];
    }
  closed = std::all_of(uses.begin(), uses.end(), [](const auto& kv) { return kv.second == 2; });
  return uses.size();
}

}  // namespace

QuadSurface::QuadSurface(std::vector<CanonicalQuad> quads, std::size_t n_vertices)
    : quads_(std::move(quads)), n_vertices_(n_vertices) {
  std::sort(quads_.begin(), quads_.end());
  if (std::adjacent_find(quads_.begin(), quads_.end()) != quads_.end())
    throw InputError("quad surface contains a repeated quad");
  for (const auto& q : quads_)
    for (auto x : q.v)
      if (x >= n_vertices_) throw InputError("quad references undeclared vertex " + std::to_string(x));
  if (!is_closed()) throw InputError("quad surface is not closed: some edge is not shared by exactly two quads");
}

QuadSurface QuadSurface::unchecked(std::vector<CanonicalQuad> quads, std::size_t n_vertices) {
  QuadSurface s;
  s.quads_ = std::move(quads);
  std::sort(s.quads_.begin(), s.quads_.end());
  s.n_vertices_ = n_vertices;
  return s;
}

bool QuadSurface::is_closed() const {
  bool closed = true;
  count_edge_uses(quads_, closed);
  return closed;
}

std::vector<VertexId> QuadSurface::used_vertices() const {
  std::vector<VertexId> out;
  for (const auto& q : quads_) out.insert(out.end(), q.v.begin(), q.v.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---- HexComplex ----

HexComplex::HexComplex(std::span<const CanonicalHex> hexes) {
  for (const auto& h : hexes) add(h);
}

void HexComplex::add(const CanonicalHex& h) {
  const auto facets = h.facets();
  for (const auto& f : facets) {
    auto it = use_.find(f);
    if (it != use_.end() && it->second >= 2)
      throw InvalidComplexError("facet used by more than two hexahedra");
  }
  for (const auto& f : facets) ++use_[f];
  hexes_.push_back(h);
}

bool HexComplex::pairwise_compatible() const {
  for (std::size_t i = 0; i < hexes_.size(); ++i)
    for (std::size_t j = i + 1; j < hexes_.size(); ++j)
      if (!is_compatible(hexes_[i], hexes_[j])) return false;
  return true;
}

QuadSurface boundary_of(const HexComplex& h) {
  std::vector<CanonicalQuad> quads;
  VertexId max_label = 0;
  for (const auto& [q, n] : h.quad_use_count()) {
    if (n > 2) throw InvalidComplexError("facet used by more than two hexahedra");
    if (n == 1) quads.push_back(q);
  }
  for (const auto& hex : h.hexes())
    for (auto x : hex.v) max_label = std::max(max_label, x + 1);
  return QuadSurface::unchecked(std::move(quads), h.empty() ? 0 : max_label);
}

}  // namespace hexenum
