#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace spa::detail {

/// Runs body(worker, index) for every index in [0, n) on up to `workers`
/// threads. Indices are handed out in chunks; callers write results into
/// per-index slots so the outcome does not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body, std::size_t chunk = 16) {
    workers = std::max(1u, workers);
    if (workers == 1 || n <= chunk) {
        for (std::size_t i = 0; i < n; ++i) {
            body(0u, i);
        }
        return;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, (n + chunk - 1) / chunk));

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&](unsigned worker) {
        try {
            for (;;) {
                const std::size_t begin = next.fetch_add(chunk);
                if (begin >= n) {
                    break;
                }
                const std::size_t end = std::min(n, begin + chunk);
                for (std::size_t i = begin; i < end; ++i) {
                    body(worker, i);
                }
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) {
                error = std::current_exception();
            }
            next.store(n);
        }
    };

    {
        std::vector<std::jthread> threads;
        threads.reserve(workers - 1);
        for (unsigned w = 1; w < workers; ++w) {
            threads.emplace_back(run, w);
        }
        run(0);
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace spa::detail
