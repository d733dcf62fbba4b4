#include "hexenum/search.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hexenum {

SearchStats& SearchStats::operator+=(const SearchStats& o) {
  nodes += o.nodes;
  backtracks += o.backtracks;
  solutions += o.solutions;
  seconds += o.seconds;
  aborted = aborted || o.aborted;
  stopped = stopped || o.stopped;
  return *this;
}

std::size_t pick_hex_vertex(const CandidateSets& c) {
  std::size_t best = 8;
  std::size_t best_size = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    const std::size_t n = c.c[i].count();
    if (n > 1 && (best == 8 || n < best_size)) {
      best = i;
      best_size = n;
    }
  }
  return best;
}

CandidateSets apply_precedence(const CandidateSets& c, VertexId next_fresh, std::size_t max_vertices) {
  const VertexSet used = VertexSet::range(0, std::min<std::size_t>(next_fresh, VertexSet::kCapacity));
  CandidateSets out;
  for (std::size_t i = 0; i < 8; ++i) {
    out.c[i] = c.c[i] & used;
    if (next_fresh < max_vertices && next_fresh < VertexSet::kCapacity && c.c[i].test(next_fresh))
      out.c[i].set(next_fresh);
  }
  return out;
}

CanonicalQuad select_front_facet(const AdjacencyState& state) {
  if (state.open_facets().empty()) throw std::logic_error("select_front_facet: empty front");
  return CanonicalQuad::from_key(state.open_facets().front());
}

std::vector<CanonicalHex> canonical_solution(std::span<const CanonicalHex> hexes, std::size_t n_boundary) {
  std::vector<VertexId> interior;
  for (const auto& h : hexes)
    for (auto x : h.v)
      if (x >= n_boundary) interior.push_back(x);
  std::sort(interior.begin(), interior.end());
  interior.erase(std::unique(interior.begin(), interior.end()), interior.end());

  std::vector<VertexId> image(interior.size());
  std::iota(image.begin(), image.end(), static_cast<VertexId>(n_boundary));
  std::vector<CanonicalHex> best;
  std::vector<CanonicalHex> cur(hexes.size());
  do {
    for (std::size_t h = 0; h < hexes.size(); ++h) {
      std::array<VertexId, 8> v = hexes[h].v;
      for (auto& x : v)
        if (x >= n_boundary) {
          const auto it = std::lower_bound(interior.begin(), interior.end(), x);
          x = image[static_cast<std::size_t>(it - interior.begin())];
        }
      cur[h] = canonicalize_hex(v);
    }
    std::sort(cur.begin(), cur.end());
    if (best.empty() || cur < best) best = cur;
  } while (std::next_permutation(image.begin(), image.end()));
  return best;
}

// ---- Searcher ----

Searcher::Searcher(QuadSurface boundary, SearchLimits limits, SearchOptions options)
    : boundary_(std::move(boundary)), limits_(limits), options_(options) {
  if (!boundary_.is_closed()) throw InputError("boundary surface is not closed");
  if (!boundary_.has_even_quad_count())
    throw InputError("boundary has an odd number of quads (" + std::to_string(boundary_.size()) +
                     "); no hexahedral mesh exists");
  if (limits_.max_vertices < boundary_.n_vertices())
    throw InputError("vertex limit " + std::to_string(limits_.max_vertices) + " is below the boundary vertex count " +
                     std::to_string(boundary_.n_vertices()));
  root_ = init_adjacency(boundary_, limits_.max_vertices);
}

void Searcher::add_external_hex(const std::array<std::int64_t, 8>& corners) {
  register_external_hex(root_, corners);
  bool all_mapped = std::all_of(corners.begin(), corners.end(), [](auto x) { return x >= 0; });
  if (all_mapped) {
    std::array<VertexId, 8> v;
    for (int k = 0; k < 8; ++k) v[k] = static_cast<VertexId>(corners[k]);
    externals_.push_back(canonicalize_hex(v));
  }
}

class Searcher::Run {
 public:
  enum class Mode { Full, Frontier };

  Run(const Searcher& s, const SolutionSink& sink, std::span<const Decision> prefix, Mode mode, std::size_t depth,
      std::vector<std::vector<Decision>>* frontier)
      : s_(s),
        sink_(sink),
        prefix_(prefix),
        mode_(mode),
        frontier_depth_(depth),
        frontier_(frontier),
        state_(s.root_),
        next_fresh_(static_cast<VertexId>(s.boundary_.n_vertices())),
        used_(VertexSet::range(0, s.boundary_.n_vertices())) {}

  SearchStats go() {
    const auto t0 = std::chrono::steady_clock::now();
    open_hex();
    stats_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return stats_;
  }

 private:
  bool halted() {
    if (halt_) return true;
    if ((stats_.nodes & 1023U) == 0) {
      const auto& o = s_.options_;
      if ((o.cancel && o.cancel->load(std::memory_order_relaxed)) ||
          (o.deadline && std::chrono::steady_clock::now() >= *o.deadline)) {
        stats_.aborted = true;
        halt_ = true;
      }
    }
    return halt_;
  }

  void emit() {
    ++stats_.solutions;
    Solution sol;
    sol.hexes = hexes_;
    sol.n_vertices = used_.count();
    if (s_.options_.verify) verify_solution(sol);
    if (!sink_(sol)) {
      stats_.stopped = true;
      halt_ = true;
    }
  }

  void open_hex() {
    ++stats_.nodes;
    if (halted()) return;
    const auto& front = state_.open_facets();
    if (s_.options_.verify) verify_front();
    if (front.empty()) {
      emit();
      return;
    }
    const std::size_t remaining = s_.limits_.max_hexes - std::min(s_.limits_.max_hexes, hexes_.size());
    // Each hex removes at most six facets from the front.
    if (front.size() > 6 * remaining) {
      ++stats_.backtracks;
      return;
    }
    const CanonicalQuad base = select_front_facet(state_);
    build(initialize_candidates(state_, base));
  }

  /// Extends the hex under construction from candidate sets c.
  void build(CandidateSets c) {
    ++stats_.nodes;
    if (halted()) return;
    const VertexId saved_fresh = next_fresh_;
    const VertexSet saved_used = used_;
    CandidateSets eff;
    for (;;) {
      if (!filter_candidates(state_, c)) {
        ++stats_.backtracks;
        restore(saved_fresh, saved_used);
        return;
      }
      eff = effective(c);
      if (eff.any_empty()) {
        ++stats_.backtracks;
        restore(saved_fresh, saved_used);
        return;
      }
      // A slot whose only admissible value is forced is fixed without branching.
      bool forced = false;
      for (std::size_t i = 4; i < 8 && !forced; ++i) {
        if (eff.c[i].singleton() && !c.c[i].singleton()) {
          c.c[i] = eff.c[i];
          take(c.c[i].first());
          forced = true;
        }
      }
      if (!forced) break;
    }

    if (c.all_singletons()) {
      close_hex(c);
    } else {
      const std::size_t slot = pick_hex_vertex(eff);
      branch(c, eff, slot);
    }
    restore(saved_fresh, saved_used);
  }

  void branch(const CandidateSets& c, const CandidateSets& eff, std::size_t slot) {
    const std::size_t depth = path_.size();
    if (mode_ == Mode::Frontier && depth == frontier_depth_) {
      frontier_->push_back(path_);
      return;
    }
    if (depth < prefix_.size()) {
      const Decision d = prefix_[depth];
      if (d.slot != slot || !eff.c[slot].test(d.value))
        throw std::logic_error("subproblem prefix does not replay against this search");
      descend(c, slot, d.value);
      return;
    }
    eff.c[slot].for_each([&](VertexId v) {
      if (!halt_) descend(c, slot, v);
    });
  }

  void descend(const CandidateSets& c, std::size_t slot, VertexId v) {
    CandidateSets child = c;
    child.c[slot].clear();
    child.c[slot].set(v);
    const VertexId saved_fresh = next_fresh_;
    const VertexSet saved_used = used_;
    take(v);
    path_.push_back({static_cast<std::uint8_t>(slot), v});
    build(child);
    path_.pop_back();
    restore(saved_fresh, saved_used);
  }

  void close_hex(const CandidateSets& c) {
    std::array<VertexId, 8> v;
    for (std::size_t i = 0; i < 8; ++i) {
      v[i] = c.c[i].first();
      take(v[i]);
    }
    const CanonicalHex h = canonicalize_hex(v);
    if (s_.options_.verify) verify_hex(h);
    const auto mark = register_hex(state_, h);
    hexes_.push_back(h);
    open_hex();
    hexes_.pop_back();
    state_.rollback(mark);
  }

  CandidateSets effective(const CandidateSets& c) const {
    if (s_.options_.symmetry_breaking) return apply_precedence(c, next_fresh_, s_.limits_.max_vertices);
    return c;
  }

  void take(VertexId v) {
    used_.set(v);
    if (v == next_fresh_) ++next_fresh_;
  }

  void restore(VertexId fresh, const VertexSet& used) {
    next_fresh_ = fresh;
    used_ = used;
  }

  void verify_hex(const CanonicalHex& h) const {
    for (const auto& g : hexes_)
      if (!is_compatible(g, h)) throw std::logic_error("search produced incompatible hexahedra");
    for (const auto& g : s_.externals_)
      if (!is_compatible(g, h)) throw std::logic_error("search produced a hex incompatible with the host mesh");
  }

  /// Recomputes the front from scratch: unused boundary quads plus interior
  /// facets used by a single hex.
  void verify_front() const {
    std::map<CanonicalQuad, int> use;
    for (const auto& h : hexes_)
      for (const auto& f : h.facets()) ++use[f];
    std::vector<std::uint32_t> expected;
    for (const auto& q : s_.boundary_.quads())
      if (!use.count(q)) expected.push_back(q.key());
    for (const auto& [q, n] : use)
      if (n == 1 && !std::binary_search(s_.boundary_.quads().begin(), s_.boundary_.quads().end(), q))
        expected.push_back(q.key());
    std::sort(expected.begin(), expected.end());
    if (expected != state_.open_facets()) throw std::logic_error("front differs from its recomputation");
  }

  void verify_solution(const Solution& sol) const {
    HexComplex complex;
    for (const auto& h : sol.hexes) complex.add(h);
    if (!complex.pairwise_compatible()) throw std::logic_error("solution is not pairwise compatible");
    if (boundary_of(complex).quads() != s_.boundary_.quads())
      throw std::logic_error("solution boundary differs from the input surface");
    if (sol.hexes.size() > s_.limits_.max_hexes || sol.n_vertices > s_.limits_.max_vertices)
      throw std::logic_error("solution exceeds the search limits");
  }

  const Searcher& s_;
  const SolutionSink& sink_;
  std::span<const Decision> prefix_;
  Mode mode_;
  std::size_t frontier_depth_;
  std::vector<std::vector<Decision>>* frontier_;

  AdjacencyState state_;
  std::vector<CanonicalHex> hexes_;
  VertexId next_fresh_;
  VertexSet used_;
  std::vector<Decision> path_;
  SearchStats stats_;
  bool halt_ = false;
};

SearchStats Searcher::run(const SolutionSink& sink) const {
  return Run(*this, sink, {}, Run::Mode::Full, 0, nullptr).go();
}

SearchStats Searcher::run_subtree(std::span<const Decision> prefix, const SolutionSink& sink) const {
  return Run(*this, sink, prefix, Run::Mode::Full, 0, nullptr).go();
}

SearchStats Searcher::collect_frontier(std::size_t depth, std::vector<std::vector<Decision>>& frontier,
                                       const SolutionSink& sink) const {
  return Run(*this, sink, {}, Run::Mode::Frontier, depth, &frontier).go();
}

SearchStats search(const QuadSurface& boundary, SearchLimits limits, const SolutionSink& sink, SearchOptions options) {
  return Searcher(boundary, limits, options).run(sink);
}

}  // namespace hexenum
