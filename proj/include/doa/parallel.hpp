#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace doa {

// Execution policy for the data-parallel sweeps (cohort simulation, WOA
// fitness evaluation). The serial path is the reference implementation;
// both paths must produce bitwise-identical results because every work
// item is independent and all reductions happen serially by index.
enum class ExecMode { serial, openmp };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

template <class F>
void parallel_for(std::size_t n, ExecMode mode, F&& f) {
  if (mode == ExecMode::serial) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    f(static_cast<std::size_t>(i));
  }
#else
  for (std::size_t i = 0; i < n; ++i) f(i);
#endif
}

}  // namespace doa
