#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace surfot {

// Requested thread count, SURFOT_THREADS, or hardware concurrency, in that
// order; always at least 1.
inline int effective_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SURFOT_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Run fn(i) for i in [0, n) over contiguous chunks. Callers guarantee the
// iterations touch disjoint data; results are then independent of the thread
// count.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = effective_threads(threads);
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    if (threads > n) threads = n;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        int lo = static_cast<int>(static_cast<long long>(n) * t / threads);
        int hi = static_cast<int>(static_cast<long long>(n) * (t + 1) / threads);
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace surfot
