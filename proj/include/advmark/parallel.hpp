#pragma once

#include <atomic>
#include <cstdint>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace advmark {

// Global switch between the OpenMP kernels and their serial fallbacks.
// Results are bit-identical either way: every output element is produced by
// exactly one thread with a fixed inner summation order, and reductions use
// fixed chunk boundaries that do not depend on the thread count.
inline std::atomic<bool>& parallel_flag() {
    static std::atomic<bool> enabled{true};
    return enabled;
}

inline bool parallel_enabled() { return parallel_flag().load(std::memory_order_relaxed); }
inline void set_parallel(bool on) { parallel_flag().store(on, std::memory_order_relaxed); }

template <class F>
inline void parallel_for(std::int64_t n, F&& f, std::int64_t grain = 2) {
    if (parallel_enabled() && n >= grain) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) f(i);
    } else {
        for (std::int64_t i = 0; i < n; ++i) f(i);
    }
}

// Deterministic parallel reduction: fixed-size chunks are summed
// independently, then combined serially in chunk order.
template <class F>
inline double parallel_sum(std::int64_t n, F&& term, std::int64_t chunk = 8192) {
    if (n <= 0) return 0.0;
    const std::int64_t nchunks = (n + chunk - 1) / chunk;
    if (!parallel_enabled() || nchunks == 1) {
        double acc = 0.0;
        for (std::int64_t i = 0; i < n; ++i) acc += term(i);
        return acc;
    }
    std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nchunks; ++c) {
        const std::int64_t lo = c * chunk;
        const std::int64_t hi = std::min(n, lo + chunk);
        double acc = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) acc += term(i);
        partial[static_cast<std::size_t>(c)] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

}  // namespace advmark
