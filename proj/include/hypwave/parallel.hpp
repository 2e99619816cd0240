#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hypwave {

// Global switch forcing the serial code path even when OpenMP is compiled
// in.  Used by tests and the benchmark to compare the two implementations.
inline bool& force_serial() {
  static bool v = false;
  return v;
}

// Parallel loop over [0, n).  Each index is processed independently; the
// body must not depend on execution order.  Every kernel built on this
// helper accumulates per-index results into disjoint slots, so serial and
// parallel execution produce bitwise-identical output for any thread count.
template <class F>
inline void parallel_for(std::ptrdiff_t n, F&& f) {
#ifdef _OPENMP
  if (!force_serial()) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) f(i);
    return;
  }
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) f(i);
}

inline int thread_count() {
#ifdef _OPENMP
  return force_serial() ? 1 : omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace hypwave
