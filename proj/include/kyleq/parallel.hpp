#pragma once

#include <cstddef>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace kyleq {

/// Caps the worker count used by parallel_for (0 = hardware default).
void set_worker_cap(int workers);
int worker_cap();

/// Parallel loop over [0, n); the body writes only to its own slot, so the
/// result is identical for any worker count.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
#if defined(_OPENMP)
  const int cap = worker_cap();
#pragma omp parallel for schedule(static) num_threads(cap > 0 ? cap : omp_get_max_threads())
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    body(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

}  // namespace kyleq
