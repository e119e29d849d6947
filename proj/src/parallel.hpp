#ifndef RFNET_SRC_PARALLEL_HPP
#define RFNET_SRC_PARALLEL_HPP

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace rfnet::detail {

// Runs fn(0..n-1), possibly concurrently. Callers keep results deterministic
// by writing to disjoint per-index slots and reducing in index order.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    const int workers = std::min(threads, n);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace rfnet::detail

#endif
