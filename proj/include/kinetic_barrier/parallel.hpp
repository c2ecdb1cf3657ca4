#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace kb {

// Worker count: KINETIC_BARRIER_THREADS env var overrides the configured
// degree; 0 or unset means all available compute units.
inline int thread_count(int configured = 0) {
    int n = configured;
    if (const char* env = std::getenv("KINETIC_BARRIER_THREADS")) {
        const int e = std::atoi(env);
        if (e > 0) n = e;
    }
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    return n;
}

// Deterministic chunked parallel-for: the item range is split into a fixed
// number of chunks independent of the worker count, so any reduction done
// per chunk and combined in chunk order is reproducible at any parallelism
// degree.
inline constexpr int kChunks = 64;

template <class Body>
void parallel_chunks(std::size_t n_items, const Body& body, int configured_threads = 0) {
    if (n_items == 0) return;
    const int n_chunks = static_cast<int>(std::min<std::size_t>(kChunks, n_items));
    const std::size_t per = (n_items + static_cast<std::size_t>(n_chunks) - 1) /
                            static_cast<std::size_t>(n_chunks);
    const int workers = std::min(thread_count(configured_threads), n_chunks);

    if (workers <= 1) {
        for (int c = 0; c < n_chunks; ++c) {
            const std::size_t lo = static_cast<std::size_t>(c) * per;
            const std::size_t hi = std::min(n_items, lo + per);
            if (lo < hi) body(c, lo, hi);
        }
        return;
    }

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (int c = w; c < n_chunks; c += workers) {
                const std::size_t lo = static_cast<std::size_t>(c) * per;
                const std::size_t hi = std::min(n_items, lo + per);
                if (lo < hi) body(c, lo, hi);
            }
        });
    }
    for (auto& t : pool) t.join();
}

// Deterministic parallel sum of f(i) over [0, n): per-chunk partials are
// accumulated in index order, then combined in chunk order.
template <class F>
double parallel_sum(std::size_t n, const F& f, int configured_threads = 0) {
    std::vector<double> partial(kChunks, 0.0);
    parallel_chunks(
        n,
        [&](int chunk, std::size_t lo, std::size_t hi) {
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += f(i);
            partial[static_cast<std::size_t>(chunk)] = s;
        },
        configured_threads);
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

}  // namespace kb
