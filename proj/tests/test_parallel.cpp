#include <doctest.h>

#include <cstdlib>
#include <random>

#include "hexenum/parallel.hpp"
#include "support.hpp"

using namespace hexenum;

TEST_CASE("split covers the tree") {
  const auto slab = support::to_surface(support::grid_quads(2, 1, 1));
  const Searcher s(slab, {3, 14});
  const auto plan = split(s, 1, 1);
  std::uint64_t n = plan.shallow_solutions.size();
  for (const auto& p : plan.subproblems)
    n += s.run_subtree(p.prefix, [](const Solution&) { return true; }).solutions;
  CHECK(n == s.run([](const Solution&) { return true; }).solutions);
}

TEST_CASE("cube splits into at most one node") {
  const Searcher s(support::to_surface(support::cube_quads()), {2, 8});
  const auto plan = split(s, 1, 1);
  CHECK(plan.subproblems.size() + plan.shallow_solutions.size() <= 1);
}

TEST_CASE("large targets expand until exhausted") {
  const Searcher s(surface_of(gen_schneiders_boundary()), {2, 18});
  const auto plan = split(s, 64, 4096);
  CHECK(plan.subproblems.size() < 64 * 4096);
  CHECK(run_parallel(plan, 2, [](const Solution&) { return true; }).solutions == 0);
}

TEST_CASE("thread counts agree and subtrees are disjoint") {
  std::mt19937_64 rng(21);
  std::vector<std::pair<QuadSurface, SearchLimits>> cases{
      {support::to_surface(support::grid_quads(2, 1, 1)), {3, 14}},
      {support::to_surface(support::grid_quads(2, 2, 1)), {4, 19}},
  };
  for (int i = 0; i < 3; ++i) cases.push_back({support::to_surface(support::random_surface(rng, 2)), {4, 12}});
  for (const auto& [surface, limits] : cases) {
    const auto one = support::run_engine(surface, limits);
    for (std::size_t threads : {2U, 4U}) {
      for (std::size_t per : {1U, 8U}) {
        const auto many = support::run_engine(surface, limits, {}, threads, per);
        CHECK(many.stats.solutions == one.stats.solutions);
        CHECK(many.raw == one.raw);
        // No canonical solution appears twice across workers.
        CHECK(many.raw.size() == many.unique.size());
      }
    }
  }
}

TEST_CASE("worker exceptions propagate") {
  const Searcher s(support::to_surface(support::grid_quads(2, 2, 1)), {4, 19});
  const auto plan = split(s, 4, 4);
  CHECK_THROWS_AS(run_parallel(plan, 4, [](const Solution&) -> bool { throw std::runtime_error("sink"); }),
                  std::runtime_error);
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_thread_count(3) == 3);
  ::setenv("HEXENUM_THREADS", "5", 1);
  CHECK(resolve_thread_count(0) == 5);
  ::setenv("HEXENUM_THREADS", "bogus", 1);
  CHECK(resolve_thread_count(0) >= 1);
  ::unsetenv("HEXENUM_THREADS");
  CHECK(resolve_thread_count(0) >= 1);
}
