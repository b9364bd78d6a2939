#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace discdrift {

inline unsigned resolve_threads(unsigned requested) noexcept {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls body(block_index, begin, end) for consecutive blocks of block_size
/// items. Block boundaries do not depend on the thread count, so callers that
/// reduce per block and merge blocks in index order get results independent
/// of scheduling.
template <class Body>
void for_each_block(std::size_t count, std::size_t block_size, unsigned threads, Body&& body) {
    if (count == 0) return;
    block_size = std::max<std::size_t>(block_size, 1);
    const std::size_t blocks = (count + block_size - 1) / block_size;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), blocks));

    auto run_block = [&](std::size_t b) {
        const std::size_t begin = b * block_size;
        body(b, begin, std::min(count, begin + block_size));
    };

    if (workers <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) run_block(b);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
                try {
                    run_block(b);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(blocks);
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace discdrift
