#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace randlitt {

/// 0 means "use all available hardware threads".
inline unsigned resolve_threads(unsigned requested)
{
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, count) into `blocks` contiguous ranges and runs fn(block, begin, end)
/// on up to `threads` workers. Block boundaries depend only on `count` and
/// `blocks`, never on the worker count, so per-block results are reproducible.
template <class Fn>
void parallel_blocks(std::uint64_t count, std::uint64_t blocks, unsigned threads, Fn&& fn)
{
    if (count == 0) return;
    blocks = std::clamp<std::uint64_t>(blocks, 1, count);
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), blocks));

    auto run_block = [&](std::uint64_t b) {
        const std::uint64_t begin = count * b / blocks;
        const std::uint64_t end = count * (b + 1) / blocks;
        fn(b, begin, end);
    };

    if (workers <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
        return;
    }

    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::uint64_t b = w; b < blocks; b += workers) run_block(b);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace randlitt
