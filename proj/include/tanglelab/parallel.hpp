#pragma once

// Worker pool over an index range. Results are written into caller-owned
// slots, so merged output keeps input order regardless of scheduling.

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace tanglelab {

inline int default_thread_count() {
    if (const char* env = std::getenv("TANGLELAB_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, int threads = 0) {
    if (threads <= 0) threads = default_thread_count();
    if (threads == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int count = std::min<std::size_t>(threads, n);
    pool.reserve(count);
    for (int i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace tanglelab
