// Execution-policy switch for the data-parallel kernels. Every parallel
// kernel keeps a serial path; results are element-indexed so both paths
// produce bitwise-identical output.
#pragma once

#include <cstddef>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace watrack {

enum class Exec { Serial, Parallel };

// Apply fn(i) for i in [0, n). Under Exec::Parallel the iterations run on
// OpenMP threads; fn must only write state owned by index i.
template <typename Fn>
void parallel_for(Exec exec, std::size_t n, Fn&& fn) {
#if defined(_OPENMP)
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            fn(static_cast<std::size_t>(i));
        }
        return;
    }
#else
    (void)exec;
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace watrack
