#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace eit {

/// Worker cap from the EIT_THREADS environment variable, else the hardware
/// concurrency (at least 1).
[[nodiscard]] std::size_t worker_count();

/// Calls fn(i) for every i in [0, n) on up to `workers` threads. Work items
/// must write only to their own output slot. The first exception thrown is
/// rethrown after all workers have stopped.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t workers = worker_count()) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n && !failed; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                        failed = true;
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

} // namespace eit
