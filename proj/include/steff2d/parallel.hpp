/**
 * @file parallel.hpp
 * @brief Minimal fork-join loop used for lattice evaluations.
 *
 * The worker count defaults to the hardware concurrency and is capped by the
 * STEFF2D_THREADS environment variable. Work is split into contiguous index
 * blocks, so callers that reduce per-index results in index order stay
 * deterministic regardless of the thread count.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace steff2d {

std::size_t thread_count();

/// Runs body(i) for i in [0, n). The first exception thrown by any worker is rethrown.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const std::size_t workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = n * w / workers;
        const std::size_t hi = n * (w + 1) / workers;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    pool.clear();  // joins
    if (error) std::rethrow_exception(error);
}

} // namespace steff2d
