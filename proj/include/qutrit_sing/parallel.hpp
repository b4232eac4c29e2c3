// Small worker-pool helper.  The QUTRIT_SING_THREADS environment variable
// caps the number of workers; unset or invalid means hardware concurrency.
#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace qsing {

inline int worker_count() {
    if (const char* s = std::getenv("QUTRIT_SING_THREADS")) {
        int v = std::atoi(s);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
}

// Run fn(i) for i in [0, n) on the worker pool.  The first exception thrown
// by any worker is rethrown on the calling thread after all workers join.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    std::size_t workers = std::min<std::size_t>(std::size_t(worker_count()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace qsing
