#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>
#include <vector>

#include "apg/common.hpp"

namespace apg {

inline unsigned default_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

/// Runs fn(i) for i in [0, n). Work is handed out through an atomic cursor;
/// callers that need deterministic output must write results into index i's
/// slot and reduce in index order afterwards.
inline void parallel_for(u64 n, unsigned threads, const std::function<void(u64)>& fn) {
    if (n == 0) return;
    threads = static_cast<unsigned>(std::max<u64>(1, std::min<u64>(threads, n)));
    if (threads == 1) {
        for (u64 i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<u64> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                u64 i = next.fetch_add(1);
                if (i >= n) break;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

/// Static contiguous split of [0, n) into `threads` ranges; fn(begin, end).
inline void parallel_ranges(u64 n, unsigned threads,
                            const std::function<void(u64, u64)>& fn) {
    if (n == 0) return;
    threads = static_cast<unsigned>(std::max<u64>(1, std::min<u64>(threads, n)));
    if (threads == 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    u64 chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        u64 lo = t * chunk;
        u64 hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([=, &fn] { fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace apg
