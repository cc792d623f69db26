#include "riccati/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace riccati {

unsigned worker_count() {
    if (const char* env = std::getenv("RICCATI_LAB_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1) return static_cast<unsigned>(v);
        return 1;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc >= 1 ? hc : 1;
}

void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (chunk == 0) throw std::invalid_argument("parallel_chunks: chunk > 0 required");
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    const unsigned workers = worker_count();
    if (workers <= 1 || n_chunks <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c)
            fn(c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto body = [&]() {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            fn(c * chunk, std::min(n, (c + 1) * chunk));
        }
    };
    const unsigned spawn = static_cast<unsigned>(
        std::min<std::size_t>(workers - 1, n_chunks - 1));
    std::vector<std::thread> pool;
    pool.reserve(spawn);
    for (unsigned w = 0; w < spawn; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
}

double pairwise_sum(const double* data, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double acc = data[0];
        for (std::size_t i = 1; i < n; ++i) acc += data[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace riccati
