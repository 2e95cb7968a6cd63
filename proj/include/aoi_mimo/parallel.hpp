#pragma once

// Minimal blocked parallel_for over an index range. Thread count defaults to
// hardware concurrency and can be capped with AOI_MIMO_THREADS.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace aoi_mimo {

inline int worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("AOI_MIMO_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

// body(begin, end) is invoked on disjoint chunks covering [0, count).
template <class Body>
inline void parallel_chunks(std::int64_t count, const Body& body) {
    const int workers = static_cast<int>(std::min<std::int64_t>(worker_count(), count));
    if (workers <= 1) {
        body(std::int64_t{0}, count);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    const std::int64_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t b = w * chunk;
        const std::int64_t e = std::min(count, b + chunk);
        if (b >= e) break;
        threads.emplace_back([&body, b, e] { body(b, e); });
    }
    for (auto& t : threads) t.join();
}

}  // namespace aoi_mimo
