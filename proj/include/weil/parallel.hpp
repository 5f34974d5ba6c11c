#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace weil {

/// Runs body(chunk) for chunk in [0, chunks) on up to hardware_concurrency threads.
/// Chunk boundaries are chosen by the caller, so results that are merged in
/// ascending chunk order do not depend on the thread count.
template <class Body>
void parallel_chunks(std::size_t chunks, Body&& body) {
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(hw, chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) body(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                try {
                    for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) body(c);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(chunks);
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace weil
