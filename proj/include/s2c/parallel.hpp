#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace s2c {

/// Runs fn(i) for every i in [begin, end) across hardware threads.
/// fn must only write state owned by index i; under that contract the
/// result is independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, Fn&& fn, unsigned num_threads = 0) {
    if (end <= begin) return;
    const std::size_t n = end - begin;
    unsigned hw = num_threads ? num_threads : std::thread::hardware_concurrency();
    if (hw <= 1 || n == 1) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
        return;
    }
    hw = static_cast<unsigned>(std::min<std::size_t>(hw, n));
    const std::size_t chunk = std::max<std::size_t>(1, n / (static_cast<std::size_t>(hw) * 8));
    std::atomic<std::size_t> next{begin};
    std::vector<std::thread> pool;
    pool.reserve(hw);
    for (unsigned t = 0; t < hw; ++t) {
        pool.emplace_back([&next, &fn, end, chunk] {
            for (;;) {
                const std::size_t lo = next.fetch_add(chunk, std::memory_order_relaxed);
                if (lo >= end) break;
                const std::size_t hi = std::min(end, lo + chunk);
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace s2c
