#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace homsim {

/// Run fn(i) for i in [0, n) on up to hardware_concurrency() threads.
/// Tasks are claimed from a shared counter; fn must only touch state owned
/// by index i so the result is identical to the serial loop.
template <typename F>
void parallel_for(std::size_t n, F&& fn) {
    if (n == 0) return;
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (workers > n) workers = static_cast<unsigned>(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace homsim
