#pragma once

// Deterministic task parallelism: tasks are identified by index, write only
// their own slot, and are scheduled work-stealing style off an atomic
// counter.  FRONTLAB_THREADS caps the worker count; it affects speed only,
// never results.

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace frontlab {

inline unsigned max_threads() {
    if (const char* env = std::getenv("FRONTLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

template <class F>
void parallel_for(std::size_t count, F&& body) {
    if (count == 0) return;
    const unsigned workers = std::min<std::size_t>(max_threads(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

}  // namespace frontlab
