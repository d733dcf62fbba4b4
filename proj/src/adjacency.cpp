#include "hexenum/adjacency.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hexenum {

namespace {

std::uint16_t encode_pair(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return static_cast<std::uint16_t>((a << 7) | b);
}

bool sorted_contains(const std::vector<std::uint32_t>& v, std::uint32_t k) {
  return std::binary_search(v.begin(), v.end(), k);
}

void sorted_insert(std::vector<std::uint32_t>& v, std::uint32_t k) { v.insert(std::lower_bound(v.begin(), v.end(), k), k); }

void sorted_erase(std::vector<std::uint32_t>& v, std::uint32_t k) {
  auto it = std::lower_bound(v.begin(), v.end(), k);
  if (it != v.end() && *it == k) v.erase(it);
}

}  // namespace

AdjacencyState::AdjacencyState(std::size_t n_vertices) : n_(n_vertices) {
  if (n_vertices > VertexSet::kCapacity)
    throw CapacityError("vertex limit " + std::to_string(n_vertices) + " exceeds bit-set capacity " +
                        std::to_string(VertexSet::kCapacity));
  allowed_.resize(n_);
  neighbors_.resize(n_);
  diagonals_.resize(n_);
  quad_diagonals_.resize(n_);
  partner_.assign(n_ * n_, kNoPartner);
  const VertexSet all = VertexSet::range(0, n_);
  for (VertexId v = 0; v < n_; ++v) {
    allowed_[v] = all;
    allowed_[v].reset(v);
  }
}

std::optional<AdjacencyState::Pair> AdjacencyState::quad_diagonal_partner(VertexId u, VertexId v) const {
  const std::uint16_t code = partner_slot(u, v);
  if (code == kNoPartner || code == kUnreachable) return std::nullopt;
  return Pair{static_cast<VertexId>(code >> 7), static_cast<VertexId>(code & 127U)};
}

FacetState AdjacencyState::facet_state(const CanonicalQuad& q) const {
  const auto k = q.key();
  if (sorted_contains(open_, k)) return FacetState::Open;
  if (sorted_contains(closed_, k)) return FacetState::Closed;
  return FacetState::Absent;
}

void AdjacencyState::disallow(VertexId u, VertexId v) {
  if (!allowed_[u].test(v)) return;
  allowed_[u].reset(v);
  allowed_[v].reset(u);
  trail_.push_back({Op::Disallow, static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(v), 0});
}

void AdjacencyState::add_edge(VertexId u, VertexId v) {
  if (neighbors_[u].test(v)) return;
  neighbors_[u].set(v);
  neighbors_[v].set(u);
  trail_.push_back({Op::Neighbor, static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(v), 0});
}

void AdjacencyState::add_interior_diagonal(VertexId u, VertexId v) {
  if (!diagonals_[u].test(v)) {
    diagonals_[u].set(v);
    diagonals_[v].set(u);
    trail_.push_back({Op::Diagonal, static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(v), 0});
  }
  disallow(u, v);
}

void AdjacencyState::set_partner(VertexId u, VertexId v, std::uint16_t code) {
  const std::uint16_t old = partner_slot(u, v);
  if (old == code) return;
  partner_slot(u, v) = code;
  partner_slot(v, u) = code;
  trail_.push_back({Op::Partner, static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(v), old});
}

void AdjacencyState::add_quad_diagonal(VertexId u, VertexId v, std::optional<Pair> partner) {
  if (!quad_diagonals_[u].test(v)) {
    quad_diagonals_[u].set(v);
    quad_diagonals_[v].set(u);
    trail_.push_back({Op::QuadDiagonal, static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(v), 0});
  }
  disallow(u, v);
  const std::uint16_t code = partner ? encode_pair((*partner)[0], (*partner)[1]) : kUnreachable;
  const std::uint16_t old = partner_slot(u, v);
  // Two distinct quads on the same diagonal can never both be matched.
  if (old == kNoPartner)
    set_partner(u, v, code);
  else if (old != code)
    set_partner(u, v, kUnreachable);
}

void AdjacencyState::add_quad(const CanonicalQuad& q) {
  for (int i = 0; i < 4; ++i) add_edge(q.v[i], q.v[(i + 1) % 4]);
  add_quad_diagonal(q.v[0], q.v[2], Pair{q.v[1], q.v[3]});
  add_quad_diagonal(q.v[1], q.v[3], Pair{q.v[0], q.v[2]});
}

void AdjacencyState::open_facet(const CanonicalQuad& q) {
  const auto k = q.key();
  if (sorted_contains(open_, k)) return;
  sorted_insert(open_, k);
  trail_.push_back({Op::OpenInsert, 0, 0, k});
}

void AdjacencyState::close_facet(const CanonicalQuad& q) {
  const auto k = q.key();
  if (sorted_contains(open_, k)) {
    sorted_erase(open_, k);
    trail_.push_back({Op::OpenErase, 0, 0, k});
  }
  if (!sorted_contains(closed_, k)) {
    sorted_insert(closed_, k);
    trail_.push_back({Op::ClosedInsert, 0, 0, k});
  }
}

void AdjacencyState::rollback(Mark m) {
  while (trail_.size() > m) {
    const TrailEntry e = trail_.back();
    trail_.pop_back();
    switch (e.op) {
      case Op::Neighbor:
        neighbors_[e.a].reset(e.b);
        neighbors_[e.b].reset(e.a);
        break;
      case Op::Diagonal:
        diagonals_[e.a].reset(e.b);
        diagonals_[e.b].reset(e.a);
        break;
      case Op::QuadDiagonal:
        quad_diagonals_[e.a].reset(e.b);
        quad_diagonals_[e.b].reset(e.a);
        break;
      case Op::Disallow:
        allowed_[e.a].set(e.b);
        allowed_[e.b].set(e.a);
        break;
      case Op::Partner:
        partner_slot(e.a, e.b) = static_cast<std::uint16_t>(e.data);
        partner_slot(e.b, e.a) = static_cast<std::uint16_t>(e.data);
        break;
      case Op::OpenInsert:
        sorted_erase(open_, e.data);
        break;
      case Op::OpenErase:
        sorted_insert(open_, e.data);
        break;
      case Op::ClosedInsert:
        sorted_erase(closed_, e.data);
        break;
    }
  }
}

std::uint64_t AdjacencyState::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xFF;
      h *= 1099511628211ULL;
    }
  };
  mix(n_);
  for (const auto* family : {&allowed_, &neighbors_, &diagonals_, &quad_diagonals_})
    for (const auto& s : *family)
      for (std::size_t w = 0; w < VertexSet::kWords; ++w) mix(s.word(w));
  for (auto p : partner_) mix(p);
  mix(open_.size());
  for (auto k : open_) mix(k);
  mix(closed_.size());
  for (auto k : closed_) mix(k);
  return h;
}

AdjacencyState init_adjacency(const QuadSurface& boundary, std::size_t n_max_vertices) {
  if (n_max_vertices < boundary.n_vertices())
    throw InputError("vertex limit is below the boundary vertex count");
  AdjacencyState state(n_max_vertices);
  for (const auto& q : boundary.quads()) {
    state.add_quad(q);
    state.open_facet(q);
  }
  return state;
}

AdjacencyState::Mark register_hex(AdjacencyState& state, const CanonicalHex& h) {
  const auto mark = state.mark();
  for (const auto& [a, b] : h.edges()) state.add_edge(a, b);
  const auto diags = h.facet_diagonals();
  for (std::size_t f = 0; f < 6; ++f) {
    state.add_quad_diagonal(diags[2 * f][0], diags[2 * f][1], diags[2 * f + 1]);
    state.add_quad_diagonal(diags[2 * f + 1][0], diags[2 * f + 1][1], diags[2 * f]);
  }
  for (const auto& [a, b] : h.interior_diagonals()) state.add_interior_diagonal(a, b);
  for (const auto& q : h.facets()) {
    switch (state.facet_state(q)) {
      case FacetState::Open:
        state.close_facet(q);
        break;
      case FacetState::Absent:
        state.open_facet(q);
        break;
      case FacetState::Closed:
        throw std::logic_error("register_hex: facet already used by two hexahedra");
    }
  }
  return mark;
}

void register_external_hex(AdjacencyState& state, const std::array<std::int64_t, 8>& corners) {
  auto mapped = [&](int k) { return corners[k] >= 0; };
  auto id = [&](int k) { return static_cast<VertexId>(corners[k]); };
  for (auto [a, b] : cube::kEdges)
    if (mapped(a) && mapped(b)) state.add_edge(id(a), id(b));
  for (auto [a, b] : cube::kInteriorDiagonals)
    if (mapped(a) && mapped(b)) state.add_interior_diagonal(id(a), id(b));
  for (const auto& f : cube::kFacets) {
    for (int d = 0; d < 2; ++d) {
      const int p = f[d], q = f[d + 2], r = f[1 - d], s = f[3 - d];
      if (!mapped(p) || !mapped(q)) continue;
      std::optional<AdjacencyState::Pair> partner;
      if (mapped(r) && mapped(s)) partner = AdjacencyState::Pair{id(r), id(s)};
      state.add_quad_diagonal(id(p), id(q), partner);
    }
    if (mapped(f[0]) && mapped(f[1]) && mapped(f[2]) && mapped(f[3])) {
      const auto q = canonicalize_quad(id(f[0]), id(f[1]), id(f[2]), id(f[3]));
      if (state.facet_state(q) != FacetState::Open) state.close_facet(q);
    }
  }
}

// ---- candidate sets ----

bool CandidateSets::any_empty() const {
  return std::any_of(c.begin(), c.end(), [](const VertexSet& s) { return s.empty(); });
}

bool CandidateSets::all_singletons() const {
  return std::all_of(c.begin(), c.end(), [](const VertexSet& s) { return s.singleton(); });
}

CandidateSets initialize_candidates(const AdjacencyState& state, const CanonicalQuad& base) {
  CandidateSets out;
  VertexSet base_set;
  for (int i = 0; i < 4; ++i) {
    out.c[i].set(base.v[i]);
    base_set.set(base.v[i]);
  }
  for (int i = 0; i < 4; ++i) {
    VertexSet c = state.allowed_neighbors(base.v[i]) & ~base_set;
    for (int j = 0; j < 4; ++j) {
      const VertexId vj = base.v[j];
      if (i != j) c &= ~(state.known_diagonals(vj) | state.known_neighbors(vj));
      if (i == (j + 2) % 4) c &= ~state.quad_diagonals(vj);
    }
    out.c[4 + i] = c;
  }
  return out;
}

namespace {

/// Vertices w such that (x, w) may take the given role in the new hex.
VertexSet admissible(const AdjacencyState& s, cube::PairKind kind, VertexId x) {
  switch (kind) {
    case cube::PairKind::Edge:
      return s.allowed_neighbors(x);
    case cube::PairKind::FaceDiagonal: {
      VertexSet m = ~(s.known_neighbors(x) | s.known_diagonals(x));
      m.reset(x);
      return m;
    }
    case cube::PairKind::InteriorDiagonal:
      return s.allowed_neighbors(x) & ~s.known_neighbors(x);
    case cube::PairKind::Same:
      break;
  }
  return VertexSet::range(0, s.n_vertices());
}

bool narrow(VertexSet& target, const VertexSet& mask, bool& changed) {
  const VertexSet next = target & mask;
  if (next != target) {
    target = next;
    changed = true;
  }
  return !target.empty();
}

}  // namespace

bool filter_candidates(const AdjacencyState& state, CandidateSets& cs) {
  auto& c = cs.c;
  const auto& kinds = cube::pair_kinds();
  auto fail = [&] {
    for (int k = 4; k < 8; ++k) c[k].clear();
    return false;
  };
  if (cs.any_empty()) return fail();

  bool changed = true;
  while (changed) {
    changed = false;

    // Pairwise roles against every fixed corner (rules 1-3, 5).
    for (int a = 0; a < 8; ++a) {
      if (!c[a].singleton()) continue;
      const VertexId x = c[a].first();
      for (int b = 0; b < 8; ++b) {
        if (b == a) continue;
        VertexSet mask = admissible(state, kinds[a][b], x);
        mask.reset(x);
        if (!narrow(c[b], mask, changed)) return fail();
      }
    }

    // Facet diagonals: both match an existing quad's diagonals or neither does.
    for (const auto& f : cube::kFacets) {
      for (int d = 0; d < 2; ++d) {
        const int p = f[d], q = f[d + 2], r = f[1 - d], s = f[3 - d];
        if (!c[p].singleton() || !c[q].singleton()) continue;
        const VertexId x = c[p].first(), y = c[q].first();
        if (state.is_quad_diagonal(x, y)) {
          const auto partner = state.quad_diagonal_partner(x, y);
          if (!partner) return fail();
          VertexSet m;
          m.set((*partner)[0]);
          m.set((*partner)[1]);
          if (!narrow(c[r], m, changed) || !narrow(c[s], m, changed)) return fail();
        } else {
          if (c[r].singleton() && !narrow(c[s], ~state.quad_diagonals(c[r].first()), changed)) return fail();
          if (c[s].singleton() && !narrow(c[r], ~state.quad_diagonals(c[s].first()), changed)) return fail();
        }
      }
      if (c[f[0]].singleton() && c[f[1]].singleton() && c[f[2]].singleton() && c[f[3]].singleton()) {
        const VertexId a = c[f[0]].first(), b = c[f[1]].first(), cc = c[f[2]].first(), d = c[f[3]].first();
        if (a == b || a == cc || a == d || b == cc || b == d || cc == d) return fail();
        if (state.facet_state(canonicalize_quad(a, b, cc, d)) == FacetState::Closed) return fail();
      }
    }
  }
  return true;
}

CandidateSets filtered(const AdjacencyState& state, CandidateSets c) {
  filter_candidates(state, c);
  return c;
}

}  // namespace hexenum
