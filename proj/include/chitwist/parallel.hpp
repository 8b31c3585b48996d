#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace chitwist {

/**
 * Index-parallel loop. Each index writes only its own output slot, so
 * results are positionally deterministic no matter how work lands on
 * threads.
 */
template <typename Fn>
void parallel_for(std::int64_t begin, std::int64_t end, Fn&& fn, unsigned threads = 0) {
    if (end <= begin) return;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::int64_t count = end - begin;
    threads = static_cast<unsigned>(std::min<std::int64_t>(threads, count));
    if (threads <= 1) {
        for (std::int64_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next(begin);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                std::int64_t i = next.fetch_add(1);
                if (i >= end) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace chitwist
