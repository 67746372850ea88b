#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace vitalbeam {

inline unsigned worker_count() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1u : n;
}

// Runs fn(i) for i in [0, n). Work is handed out in fixed-size blocks so the
// assignment of indices to blocks does not depend on the thread count; callers
// that need reproducible reductions accumulate per block and merge in block
// order afterwards.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         unsigned threads = 0) {
    if (threads == 0) threads = worker_count();
    if (n == 0) return;
    if (threads <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = static_cast<std::size_t>(t) * chunk;
        if (lo >= n) break;
        std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace vitalbeam
