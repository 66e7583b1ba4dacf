#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "tsskew/montecarlo.hpp"

namespace tsskew::detail {

struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        double y = v - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

// Runs body(rng, n, sums) over fixed-size chunks on a thread pool. Each chunk owns
// `width` compensated sums; chunks are merged in index order so the result does
// not depend on the number of workers.
template <class Body>
std::vector<double> run_chunks(std::int64_t n_paths, std::int64_t chunk_size, std::uint64_t seed, int n_threads,
                               std::size_t width, Body body) {
    const std::int64_t n_chunks = (n_paths + chunk_size - 1) / chunk_size;
    std::vector<std::vector<KahanSum>> partial(static_cast<std::size_t>(n_chunks), std::vector<KahanSum>(width));
    std::atomic<std::int64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::int64_t c = next.fetch_add(1);
            if (c >= n_chunks) break;
            std::int64_t n = std::min(chunk_size, n_paths - c * chunk_size);
            auto rng = chunk_rng(seed, static_cast<std::uint64_t>(c));
            body(rng, n, partial[static_cast<std::size_t>(c)]);
        }
    };
    int nt = n_threads > 0 ? n_threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    nt = static_cast<int>(std::min<std::int64_t>(nt, std::max<std::int64_t>(1, n_chunks)));
    std::vector<std::thread> pool;
    for (int i = 1; i < nt; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::vector<KahanSum> total(width);
    for (const auto& chunk : partial)
        for (std::size_t j = 0; j < width; ++j) {
            total[j].add(chunk[j].sum);
            total[j].add(-chunk[j].comp);
        }
    std::vector<double> out(width);
    for (std::size_t j = 0; j < width; ++j) out[j] = total[j].sum - total[j].comp;
    return out;
}

}  // namespace tsskew::detail
