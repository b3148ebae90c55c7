#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace igw {

/// Hardware thread count, at least 1.
inline unsigned default_workers() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

/// Runs fn(i) for i in [0, count) on up to `workers` threads.
///
/// Work is split into contiguous index blocks, so a caller that writes
/// results into a preallocated slot per index gets output independent of
/// the worker count. The first exception thrown by fn is rethrown on the
/// calling thread after all workers join.
template <typename Fn>
void parallel_for_index(std::size_t count, unsigned workers, Fn&& fn) {
    if (count == 0) return;
    const std::size_t n_threads =
        std::min<std::size_t>(workers == 0 ? 1 : workers, count);
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    std::exception_ptr first_error;
    std::mutex error_mutex;

    const std::size_t chunk = (count + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(begin + chunk, count);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace igw
