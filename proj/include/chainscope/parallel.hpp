#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace chainscope {

// Worker count used when none is passed explicitly. Initialised from
// CHAINSCOPE_JOBS, else hardware concurrency.
unsigned default_jobs();
void set_default_jobs(unsigned jobs);

// Calls f(i) for i in [0, n). Work is handed out in chunks from a shared
// counter; callers must write results to per-index slots so the outcome does
// not depend on scheduling. The first exception thrown by any worker is
// rethrown on the calling thread.
template <typename F>
void parallel_for(std::size_t n, F&& f, unsigned jobs = 0) {
    if (jobs == 0) jobs = default_jobs();
    const std::size_t workers = std::min<std::size_t>(jobs, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const std::size_t chunk = std::max<std::size_t>(1, n / (workers * 8));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        try {
            for (;;) {
                const std::size_t start = next.fetch_add(chunk);
                if (start >= n) break;
                const std::size_t end = std::min(n, start + chunk);
                for (std::size_t i = start; i < end; ++i) f(i);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(n);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace chainscope
