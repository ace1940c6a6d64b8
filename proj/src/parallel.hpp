#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace dminr::detail {

// Runs fn(i) for i in [0, count) on up to `workers` threads, in chunks.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    const unsigned threads = static_cast<unsigned>(
        std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    const std::size_t chunk = std::max<std::size_t>(1, count / (std::size_t{threads} * 8));
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t begin = next.fetch_add(chunk);
                if (begin >= count) return;
                const std::size_t end = std::min(count, begin + chunk);
                for (std::size_t i = begin; i < end; ++i) fn(i);
            }
        });
    }
}

} // namespace dminr::detail
