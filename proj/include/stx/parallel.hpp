#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <vector>

namespace stx {

/// Runs fn(i) for i in [0, n) across the given number of threads. Each index
/// writes to its own output slot, so results do not depend on scheduling.
template <typename Fn>
void parallel_for_index(std::size_t n, std::size_t threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const std::size_t n_workers = std::min(threads, n);
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

/// Splits [0, total) into fixed chunks, evaluates fn(begin, end) per chunk
/// (possibly in parallel) and returns the partial states in chunk order.
/// Chunk boundaries depend only on total and chunk_size, so any merge that
/// walks the returned vector in order is bit-reproducible for every thread
/// count.
template <typename State, typename Fn>
std::vector<State> run_chunked(std::int64_t total, std::int64_t chunk_size, std::size_t threads,
                               Fn&& fn) {
    const std::int64_t n_chunks = total > 0 ? (total + chunk_size - 1) / chunk_size : 0;
    std::vector<State> states(static_cast<std::size_t>(n_chunks));
    parallel_for_index(static_cast<std::size_t>(n_chunks), threads, [&](std::size_t c) {
        const std::int64_t lo = static_cast<std::int64_t>(c) * chunk_size;
        const std::int64_t hi = std::min(total, lo + chunk_size);
        states[c] = fn(lo, hi);
    });
    return states;
}

}  // namespace stx
