#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace fastharq {

/// Number of worker threads used by the sampling routines; 0 selects hardware_concurrency.
inline unsigned& worker_threads() {
    static unsigned n = 0;
    return n;
}

/// Splits [0, n) into fixed chunks, runs `work(begin, end)` on each (possibly in parallel)
/// and merges the per-chunk results in chunk order. The result does not depend on the
/// number of threads.
template <class Acc, class Work>
Acc reduce_chunks(std::uint64_t n, std::uint64_t chunk, Work work) {
    const std::uint64_t n_chunks = chunk == 0 ? 0 : (n + chunk - 1) / chunk;
    std::vector<Acc> parts(n_chunks);
    unsigned threads = worker_threads() ? worker_threads() : std::thread::hardware_concurrency();
    threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, std::max<std::uint64_t>(n_chunks, 1)));

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto run = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= n_chunks || failed.load()) return;
            try {
                parts[c] = work(c * chunk, std::min(n, (c + 1) * chunk));
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
                return;
            }
        }
    };
    if (threads == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    Acc total{};
    for (auto& p : parts) total.merge(p);
    return total;
}

/// Evaluates f(0..n-1) on worker threads; results keep index order.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F f) {
    std::vector<R> out(n);
    struct Unit {
        void merge(const Unit&) {}
    };
    reduce_chunks<Unit>(n, 1, [&](std::uint64_t begin, std::uint64_t) {
        out[begin] = f(static_cast<std::size_t>(begin));
        return Unit{};
    });
    return out;
}

}  // namespace fastharq
