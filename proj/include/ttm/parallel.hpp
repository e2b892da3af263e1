#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace ttm {

namespace detail {
inline std::atomic<int>& thread_cap() {
    static std::atomic<int> cap{0}; // 0 = unset
    return cap;
}
} // namespace detail

/// Caps the number of worker threads (0 restores the default).
inline void set_threads(int n) { detail::thread_cap().store(n); }

/// Effective worker count: explicit cap, then TTM_THREADS, then hardware.
inline int thread_count() {
    int cap = detail::thread_cap().load();
    if (cap > 0) return cap;
    if (const char* env = std::getenv("TTM_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [0, n) on up to thread_count() workers.
/// Work items must write disjoint outputs; the static index partition means
/// results never depend on the worker count.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    if (n == 0) return;
    std::size_t workers = static_cast<std::size_t>(thread_count());
    if (workers > n) workers = n;
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
}

} // namespace ttm
