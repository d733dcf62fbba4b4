#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "hexenum/search.hpp"

namespace hexenum {

/// One node of the search tree, identified by the decisions leading to it.
struct Subproblem {
  std::vector<Decision> prefix;
};

/// Breadth-first frontier of a search tree. Subtrees are disjoint and, with
/// the shallow solutions, cover the whole tree.
struct WorkPlan {
  std::shared_ptr<const Searcher> searcher;
  std::vector<Subproblem> subproblems;
  std::size_t target_per_thread = 4096;
  /// Solutions met above the frontier layer while splitting.
  std::vector<Solution> shallow_solutions;
  SearchStats split_stats;
  /// Depth (in decisions) of the frontier layer.
  std::size_t depth = 0;
};

inline constexpr std::size_t kDefaultSubtreesPerThread = 4096;

/// Expands the tree layer by layer until at least n_threads *
/// target_per_thread open nodes exist or the tree is exhausted.
WorkPlan split(const Searcher& searcher, std::size_t n_threads,
               std::size_t target_per_thread = kDefaultSubtreesPerThread);

/// Runs every subproblem on n_threads workers pulling from a shared cursor.
/// The sink is serialised behind a mutex. A worker exception cancels the
/// others and is rethrown after all workers have joined.
SearchStats run_parallel(const WorkPlan& plan, std::size_t n_threads, const SolutionSink& sink);

/// split + run_parallel; a single thread runs the plain sequential search.
SearchStats parallel_search(const Searcher& searcher, std::size_t n_threads, const SolutionSink& sink,
                            std::size_t target_per_thread = kDefaultSubtreesPerThread);

/// 0 means auto: the HEXENUM_THREADS environment variable if set, otherwise
/// the hardware concurrency.
std::size_t resolve_thread_count(std::size_t requested);

}  // namespace hexenum
