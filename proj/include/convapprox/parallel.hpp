#ifndef CONVAPPROX_PARALLEL_HPP
#define CONVAPPROX_PARALLEL_HPP

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace convapprox {

/// Worker cap from CONV_APPROX_THREADS; 0 or unset means hardware concurrency.
inline int thread_budget() {
    if (const char* env = std::getenv("CONV_APPROX_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs fn(i) for i in [0, n) over a block partition. fn must only touch
/// per-index state; the partition (not the results) depends on thread count.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
    const int workers = std::min(thread_budget(), n > 0 ? n : 1);
    if (workers <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int lo = w * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace convapprox

#endif
