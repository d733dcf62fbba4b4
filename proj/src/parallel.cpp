#include "hexenum/parallel.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace hexenum {

namespace {

constexpr std::size_t kMaxSplitDepth = 512;

}  // namespace

WorkPlan split(const Searcher& searcher, std::size_t n_threads, std::size_t target_per_thread) {
  WorkPlan plan;
  plan.searcher = std::make_shared<const Searcher>(searcher);
  plan.target_per_thread = target_per_thread;
  const std::size_t target = std::max<std::size_t>(1, n_threads) * std::max<std::size_t>(1, target_per_thread);

  for (std::size_t depth = 0; depth <= kMaxSplitDepth; ++depth) {
    std::vector<std::vector<Decision>> frontier;
    std::vector<Solution> shallow;
    const SearchStats st = searcher.collect_frontier(depth, frontier, [&](const Solution& s) {
      shallow.push_back(s);
      return true;
    });
    plan.split_stats += st;
    plan.depth = depth;
    if (frontier.empty() || frontier.size() >= target || depth == kMaxSplitDepth || st.aborted) {
      plan.shallow_solutions = std::move(shallow);
      plan.subproblems.reserve(frontier.size());
      for (auto& p : frontier) plan.subproblems.push_back({std::move(p)});
      break;
    }
  }
  return plan;
}

SearchStats run_parallel(const WorkPlan& plan, std::size_t n_threads, const SolutionSink& sink) {
  const auto t0 = std::chrono::steady_clock::now();
  n_threads = std::max<std::size_t>(1, n_threads);
  std::mutex sink_mutex;
  std::atomic<bool> stop{false};
  std::atomic<std::size_t> cursor{0};

  SearchStats total;
  total.aborted = plan.split_stats.aborted;
  for (const auto& s : plan.shallow_solutions) {
    ++total.solutions;
    if (!sink(s)) {
      total.stopped = true;
      total.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return total;
    }
  }

  // Each worker watches the shared stop flag; an outer cancel flag is relayed.
  SearchOptions worker_options = plan.searcher->options();
  const std::atomic<bool>* outer_cancel = worker_options.cancel;
  worker_options.cancel = &stop;
  Searcher worker_proto = *plan.searcher;
  worker_proto.set_options(worker_options);

  std::vector<SearchStats> per_worker(n_threads);
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&](std::size_t id) {
    try {
      const Searcher searcher = worker_proto;
      const SolutionSink guarded = [&](const Solution& s) {
        std::lock_guard lock(sink_mutex);
        if (stop.load()) return false;
        if (!sink(s)) {
          stop.store(true);
          return false;
        }
        return true;
      };
      for (;;) {
        if (stop.load() || (outer_cancel && outer_cancel->load())) {
          per_worker[id].aborted = per_worker[id].aborted || !per_worker[id].stopped;
          stop.store(true);
          break;
        }
        const std::size_t i = cursor.fetch_add(1);
        if (i >= plan.subproblems.size()) break;
        per_worker[id] += searcher.run_subtree(plan.subproblems[i].prefix, guarded);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      stop.store(true);
    }
  };

  if (n_threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& w : per_worker) {
    total.nodes += w.nodes;
    total.backtracks += w.backtracks;
    total.solutions += w.solutions;
    total.stopped = total.stopped || w.stopped;
    total.aborted = total.aborted || w.aborted;
  }
  // A stop requested by the sink is not an abort.
  if (total.stopped) total.aborted = false;
  total.nodes += plan.split_stats.nodes;
  total.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return total;
}

SearchStats parallel_search(const Searcher& searcher, std::size_t n_threads, const SolutionSink& sink,
                            std::size_t target_per_thread) {
  if (n_threads <= 1) return searcher.run(sink);
  const auto t0 = std::chrono::steady_clock::now();
  const WorkPlan plan = split(searcher, n_threads, target_per_thread);
  SearchStats st = run_parallel(plan, n_threads, sink);
  st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return st;
}

std::size_t resolve_thread_count(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HEXENUM_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n > 0) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace hexenum
