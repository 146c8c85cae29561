#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace isac {

/// Runs fn(i) for i in [0, count) on `workers` threads. Worker w takes the
/// indices i with i % workers == w. The first exception thrown by any call is
/// rethrown after all workers join.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
    const std::size_t w = static_cast<std::size_t>(std::max(1, workers));
    if (w == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    threads.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
        threads.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += w) fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace isac
