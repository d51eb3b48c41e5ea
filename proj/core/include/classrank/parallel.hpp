#ifndef CLASSRANK_PARALLEL_HPP
#define CLASSRANK_PARALLEL_HPP

#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

namespace classrank {

/// Contiguous index ranges [begin, end) covering [0, n), one per worker.
/// Deterministic partition: merging chunk results in slot order gives the
/// same answer for any worker count.
inline std::vector<std::pair<uint64_t, uint64_t>> chunk_ranges(uint64_t n, unsigned workers) {
    if (workers == 0) workers = 1;
    if (uint64_t(workers) > n) workers = unsigned(n ? n : 1);
    std::vector<std::pair<uint64_t, uint64_t>> out;
    uint64_t base = n / workers, extra = n % workers, at = 0;
    for (unsigned w = 0; w < workers; ++w) {
        uint64_t len = base + (w < extra ? 1 : 0);
        out.emplace_back(at, at + len);
        at += len;
    }
    return out;
}

/// fn(slot, begin, end) per chunk, on its own thread when more than one
/// chunk exists. Slots index the chunk_ranges(n, workers) partition.
template <typename Fn>
void run_chunked(uint64_t n, unsigned workers, Fn&& fn) {
    auto ranges = chunk_ranges(n, workers);
    if (ranges.size() <= 1) {
        for (size_t s = 0; s < ranges.size(); ++s) fn(s, ranges[s].first, ranges[s].second);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(ranges.size());
    for (size_t s = 0; s < ranges.size(); ++s)
        threads.emplace_back([&fn, s, b = ranges[s].first, e = ranges[s].second] { fn(s, b, e); });
    for (auto& t : threads) t.join();
}

/// Default worker count: CLASSRANK_WORKERS, else 1.
unsigned default_workers();

} // namespace classrank

#endif
