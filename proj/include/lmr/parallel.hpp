#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace lmr {

inline constexpr const char* kWorkersEnv = "LMR_WORKERS";

/// Worker count from LMR_WORKERS, else the hardware concurrency.
inline int default_workers() {
    if (const char* v = std::getenv(kWorkersEnv)) {
        try {
            const int w = std::stoi(v);
            if (w >= 1) return w;
        } catch (...) {
        }
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

/// Calls f(i) for i in [0, n) on up to `workers` threads. Indices are claimed
/// dynamically; callers write results by index so the outcome does not depend
/// on the schedule. The first exception is rethrown after all threads join.
template <class F>
void parallel_for(std::size_t n, int workers, F&& f) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nt - 1);
    for (std::size_t t = 1; t < nt; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace lmr
