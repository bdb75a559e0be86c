#pragma once

// Deterministic work distribution: results are stored by task index, so the
// output never depends on the worker count. ERGOLIN_THREADS caps parallelism.

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace ergolin {

inline int thread_budget(int requested = 0) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    int n = requested > 0 ? requested : hw;
    if (const char* env = std::getenv("ERGOLIN_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return std::max(1, n);
}

// Runs fn(i) for i in [0, count) across up to `threads` workers.
inline void parallel_for_indexed(std::size_t count, int threads,
                                 const std::function<void(std::size_t)>& fn) {
    int n = std::min<std::size_t>(thread_budget(threads), count);
    if (n <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t i = static_cast<std::size_t>(t); i < count;
                 i += static_cast<std::size_t>(n)) {
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace ergolin
