#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace wpsdo {

// Runs fn(i) for i in [0, count) over contiguous chunks. Each index is
// handled by exactly one thread, so per-index results are deterministic.
template <typename F>
void parallel_for(std::size_t count, F&& fn) {
    const std::size_t hw = std::max(1U, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(hw, count / 16 + 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace wpsdo
