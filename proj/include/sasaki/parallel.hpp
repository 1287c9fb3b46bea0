#pragma once

// Deterministic work partitioning for the OpenMP kernels. Work is split into
// fixed-size blocks; each block is processed sequentially and its partial
// result lands in a preallocated slot, so the final (serial) combine step is
// identical for every thread count.

#include <algorithm>
#include <cstddef>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace sasaki {

inline int max_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// fn(block_index, begin, end) for each block of size block_size covering [0, total).
template <class F>
void for_each_block(long long total, long long block_size, F&& fn, bool parallel = true) {
    if (total <= 0) return;
    const long long nblocks = (total + block_size - 1) / block_size;
#if defined(_OPENMP)
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long b = 0; b < nblocks; ++b) {
            fn(b, b * block_size, std::min(total, (b + 1) * block_size));
        }
        return;
    }
#endif
    (void)parallel;
    for (long long b = 0; b < nblocks; ++b) {
        fn(b, b * block_size, std::min(total, (b + 1) * block_size));
    }
}

// Parallel map over [0, count): out[i] = fn(i). One item per iteration,
// preallocated output, order-independent by construction.
template <class T, class F>
std::vector<T> map_indexed(long long count, F&& fn, bool parallel = true) {
    std::vector<T> out(static_cast<std::size_t>(std::max<long long>(count, 0)));
#if defined(_OPENMP)
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(i);
        return out;
    }
#endif
    (void)parallel;
    for (long long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    return out;
}

}  // namespace sasaki
