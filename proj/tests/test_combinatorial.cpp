#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "hexenum/combinatorial.hpp"
#include "oracle.hpp"

using namespace hexenum;

namespace {

std::array<VertexId, 8> random_hex(std::mt19937_64& rng) {
  std::vector<VertexId> pool(40);
  std::iota(pool.begin(), pool.end(), 0U);
  std::shuffle(pool.begin(), pool.end(), rng);
  std::array<VertexId, 8> h;
  std::copy(pool.begin(), pool.begin() + 8, h.begin());
  return h;
}

}  // namespace

TEST_CASE("quad canonical form") {
  CHECK(canonicalize_quad(3, 0, 1, 2).v == std::array<VertexId, 4>{0, 1, 2, 3});
  CHECK(canonicalize_quad(0, 3, 2, 1).v == std::array<VertexId, 4>{0, 1, 2, 3});
  CHECK(canonicalize_quad(5, 9, 2, 7).v == std::array<VertexId, 4>{2, 7, 5, 9});
  CHECK_THROWS_AS(canonicalize_quad(1, 2, 1, 3), InvalidElementError);
}

TEST_CASE("quad canonical form matches the brute-force minimum") {
  std::mt19937_64 rng(1);
  for (int it = 0; it < 500; ++it) {
    std::array<VertexId, 4> q;
    std::set<VertexId> seen;
    for (auto& x : q) {
      do x = rng() % 20;
      while (!seen.insert(x).second);
    }
    const auto c = canonicalize_quad(q[0], q[1], q[2], q[3]);
    CHECK(c.v == oracle::canonical_quad(q));
    CHECK(canonicalize_quad(c.v[0], c.v[1], c.v[2], c.v[3]) == c);
    // Diagonals survive.
    const std::set<std::set<VertexId>> d0{{q[0], q[2]}, {q[1], q[3]}};
    const std::set<std::set<VertexId>> d1{{c.v[0], c.v[2]}, {c.v[1], c.v[3]}};
    CHECK(d0 == d1);
  }
}

TEST_CASE("automorphism group has exactly 48 elements") {
  const auto& a = cube::automorphisms();
  std::set<std::array<std::uint8_t, 8>> distinct(a.begin(), a.end());
  CHECK(distinct.size() == 48);
  CHECK(oracle::automorphisms().size() == 48);
  std::set<std::array<std::uint8_t, 8>> ref;
  for (const auto& p : oracle::automorphisms()) {
    std::array<std::uint8_t, 8> q;
    for (int k = 0; k < 8; ++k) q[k] = static_cast<std::uint8_t>(p[k]);
    ref.insert(q);
  }
  CHECK(ref == distinct);
}

TEST_CASE("hex canonical form") {
  const std::array<VertexId, 8> id{0, 1, 2, 3, 4, 5, 6, 7};
  CHECK(canonicalize_hex(id).v == id);
  CHECK(canonicalize_hex({4, 5, 6, 7, 0, 1, 2, 3}).v == id);
  for (const auto& p : cube::automorphisms()) {
    std::array<VertexId, 8> img;
    for (int k = 0; k < 8; ++k) img[k] = id[p[k]];
    CHECK(canonicalize_hex(img).v == id);
  }
  CHECK_THROWS_AS(canonicalize_hex({0, 1, 2, 3, 4, 5, 6, 0}), InvalidElementError);
}

TEST_CASE("hex canonical form: idempotent, orbit-invariant, oracle-equal") {
  std::mt19937_64 rng(2);
  for (int it = 0; it < 300; ++it) {
    const auto h = random_hex(rng);
    const auto c = canonicalize_hex(h);
    CHECK(canonicalize_hex(c.v) == c);
    oracle::Hex o;
    std::copy(h.begin(), h.end(), o.begin());
    const auto oc = oracle::canonical_hex(o);
    CHECK(std::equal(oc.begin(), oc.end(), c.v.begin()));
    for (const auto& p : cube::automorphisms()) {
      std::array<VertexId, 8> img;
      for (int k = 0; k < 8; ++k) img[k] = h[p[k]];
      REQUIRE(canonicalize_hex(img) == c);
    }
    // Sub-faces are preserved as sets.
    std::set<CanonicalQuad> f0, f1;
    for (const auto& f : CanonicalHex{h}.facets()) f0.insert(f);
    for (const auto& f : c.facets()) f1.insert(f);
    CHECK(f0 == f1);
  }
}

TEST_CASE("no 49th permutation fixes a hex") {
  // Permutations of corner positions mapping the hex to an equivalent tuple
  // are exactly the automorphisms; count them by brute force.
  const std::array<VertexId, 8> h{0, 1, 2, 3, 4, 5, 6, 7};
  const auto c = canonicalize_hex(h);
  std::array<int, 8> p;
  std::iota(p.begin(), p.end(), 0);
  int n = 0;
  do {
    std::array<VertexId, 8> img;
    for (int k = 0; k < 8; ++k) img[k] = h[p[k]];
    if (canonicalize_hex(img) == c) ++n;
  } while (std::next_permutation(p.begin(), p.end()));
  CHECK(n == 48);
}

TEST_CASE("compatibility") {
  const auto a = canonicalize_hex({0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(is_compatible(a, canonicalize_hex({4, 5, 6, 7, 8, 9, 10, 11})));
  CHECK_FALSE(is_compatible(a, a));
  // {0,2} is a facet diagonal of a and an edge of b.
  CHECK_FALSE(is_compatible(a, canonicalize_hex({0, 2, 12, 13, 14, 15, 16, 17})));
  // Shared edge, shared corner, disjoint.
  CHECK(is_compatible(a, canonicalize_hex({0, 1, 12, 13, 14, 15, 16, 17})));
  CHECK(is_compatible(a, canonicalize_hex({0, 11, 12, 13, 14, 15, 16, 17})));
  CHECK(is_compatible(a, canonicalize_hex({10, 11, 12, 13, 14, 15, 16, 17})));
  // Three shared vertices.
  CHECK_FALSE(is_compatible(a, canonicalize_hex({0, 1, 2, 13, 14, 15, 16, 17})));
  // Same four vertices, different cyclic order.
  CHECK_FALSE(is_compatible(a, canonicalize_hex({4, 6, 5, 7, 8, 9, 10, 11})));
}

TEST_CASE("compatibility is symmetric and matches the oracle") {
  std::mt19937_64 rng(3);
  int agree = 0;
  for (int it = 0; it < 4000; ++it) {
    std::array<VertexId, 8> x, y;
    std::vector<VertexId> pool(12);
    std::iota(pool.begin(), pool.end(), 0U);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::copy(pool.begin(), pool.begin() + 8, x.begin());
    std::shuffle(pool.begin(), pool.end(), rng);
    std::copy(pool.begin(), pool.begin() + 8, y.begin());
    // Bias towards overlapping facets.
    if (it % 3 == 0) {
      y[0] = x[4], y[1] = x[5], y[2] = x[6], y[3] = x[7];
      std::set<VertexId> used(y.begin(), y.begin() + 4);
      std::size_t k = 4;
      for (VertexId v = 0; v < 40 && k < 8; ++v)
        if (!used.count(v) && std::find(x.begin(), x.end(), v) == x.end()) y[k++] = v;
    }
    const auto a = canonicalize_hex(x), b = canonicalize_hex(y);
    CHECK(is_compatible(a, b) == is_compatible(b, a));
    oracle::Hex ox, oy;
    std::copy(x.begin(), x.end(), ox.begin());
    std::copy(y.begin(), y.end(), oy.begin());
    agree += is_compatible(a, b) == oracle::compatible(ox, oy);
  }
  CHECK(agree == 4000);
}

TEST_CASE("boundary extraction") {
  HexComplex one;
  one.add(canonicalize_hex({0, 1, 2, 3, 4, 5, 6, 7}));
  const auto b1 = boundary_of(one);
  CHECK(b1.size() == 6);
  const auto f = canonicalize_hex({0, 1, 2, 3, 4, 5, 6, 7}).facets();
  CHECK(std::set<CanonicalQuad>(f.begin(), f.end()) == std::set<CanonicalQuad>(b1.quads().begin(), b1.quads().end()));

  HexComplex two = one;
  two.add(canonicalize_hex({4, 5, 6, 7, 8, 9, 10, 11}));
  CHECK(boundary_of(two).size() == 10);
  CHECK(boundary_of(HexComplex{}).empty());

  int uses = 0;
  for (const auto& [q, n] : two.quad_use_count()) uses += n;
  CHECK(uses == 6 * 2);

  // A third use of a facet is rejected.
  two.add(canonicalize_hex({8, 9, 10, 11, 12, 13, 14, 15}));
  CHECK_THROWS_AS(two.add(canonicalize_hex({8, 9, 10, 11, 16, 17, 18, 19})), InvalidComplexError);
}

TEST_CASE("quad surfaces") {
  HexComplex one;
  one.add(canonicalize_hex({0, 1, 2, 3, 4, 5, 6, 7}));
  const auto b = boundary_of(one);
  const QuadSurface s(b.quads(), 8);
  CHECK(s.is_closed());
  CHECK(s.has_even_quad_count());
  std::vector<CanonicalQuad> open(b.quads().begin(), b.quads().end() - 1);
  CHECK_THROWS_AS(QuadSurface(open, 8), InputError);
  std::vector<CanonicalQuad> dup = b.quads();
  dup.push_back(dup.front());
  CHECK_THROWS_AS(QuadSurface(dup, 8), InputError);
  CHECK_THROWS_AS(QuadSurface(b.quads(), 7), InputError);
}
