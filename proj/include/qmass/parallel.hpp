// Thin OpenMP wrapper. Per-node kernels run in parallel over disjoint output
// slots; reductions are always done serially over the stored per-node values
// so results are bit-identical for any thread count (QMASS_THREADS included).
#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qmass {

// Worker cap: min(OpenMP max threads, QMASS_THREADS if set).
int max_threads();

template <class F>
void parallel_for(std::size_t count, F&& f) {
#ifdef _OPENMP
  const int nt = max_threads();
  if (nt > 1 && count >= 256) {
#pragma omp parallel for schedule(static) num_threads(nt)
    for (long long i = 0; i < static_cast<long long>(count); ++i)
      f(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < count; ++i) f(i);
}

}  // namespace qmass
