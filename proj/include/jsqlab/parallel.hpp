#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace jsqlab {

// Worker cap: hardware concurrency, bounded by the JSQLAB_THREADS env var.
inline int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("JSQLAB_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < hw) hw = cap;
    }
    return hw;
}

// Static partition of [0, n); body(i) must write only to index-i slots so the
// result is identical to the sequential order.
inline void parallel_for(int n, const std::function<void(int)>& body) {
    int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&, w]() {
            for (int i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& t : threads) t.join();
}

}  // namespace jsqlab
