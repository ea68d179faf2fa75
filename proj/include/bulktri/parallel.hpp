#pragma once

#include <algorithm>
#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bulktri {

// Fork/join execution context handed to every data-parallel primitive.
//
// Work is cut into fixed-size blocks of `grain` elements; the block layout
// depends only on the input length and the grain, never on `workers`, so
// results are identical for any worker count.
struct Executor {
  int workers = 1;
  std::size_t grain = 8192;

  static Executor sequential() { return Executor{1, 8192}; }

  static Executor hardware() {
#ifdef _OPENMP
    return Executor{omp_get_max_threads(), 8192};
#else
    return sequential();
#endif
  }

  static Executor with_workers(int n) {
    return Executor{std::max(1, n), 8192};
  }

  bool is_parallel(std::size_t n) const { return workers > 1 && n > grain; }

  std::size_t num_blocks(std::size_t n) const {
    return n == 0 ? 0 : (n + grain - 1) / grain;
  }
};

// Calls body(begin, end) over disjoint blocks covering [0, n).
template <class Body>
void parallel_blocks(const Executor& ex, std::size_t n, Body&& body) {
  if (n == 0) return;
  if (!ex.is_parallel(n)) {
    body(std::size_t{0}, n);
    return;
  }
  const std::size_t blocks = ex.num_blocks(n);
  const std::size_t grain = ex.grain;
#pragma omp parallel for num_threads(ex.workers) schedule(dynamic, 1)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * grain;
    body(lo, std::min(n, lo + grain));
  }
}

template <class Body>
void parallel_for(const Executor& ex, std::size_t n, Body&& body) {
  parallel_blocks(ex, n, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) body(i);
  });
}

// Runs task(i) for i in [0, count); each task is a coarse unit of work.
template <class Task>
void parallel_tasks(const Executor& ex, std::size_t count, Task&& task) {
  if (ex.workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
#pragma omp parallel for num_threads(ex.workers) schedule(dynamic, 1)
  for (std::size_t i = 0; i < count; ++i) task(i);
}

}  // namespace bulktri
