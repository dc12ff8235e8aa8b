#pragma once

#ifdef _OPENMP
#include <omp.h>
#define LPSWE_PRAGMA(x) _Pragma(#x)
#define LPSWE_PARALLEL_FOR LPSWE_PRAGMA(omp parallel for schedule(static))
#else
#define LPSWE_PARALLEL_FOR
#endif

namespace lpswe {

/// Caps the number of worker threads; no-op without OpenMP.
inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

} // namespace lpswe
