#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace drinf {

/// Worker count from DRINF_THREADS; unset, 0 or unparsable means one worker
/// per hardware thread.
std::size_t worker_count();

/// Runs fn(i) for i in [0, count) on up to worker_count() threads. Work is
/// handed out by index, so results written to slot i are independent of
/// scheduling. The exception from the lowest failing index is rethrown.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const std::size_t workers = std::min(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex guard;
    std::exception_ptr error;
    std::size_t error_index = count;
    auto body = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(guard);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(body);
    }
    body();
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace drinf
