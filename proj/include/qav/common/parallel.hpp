#pragma once

#include <thread>
#include <utility>
#include <vector>

namespace qav {

// Runs body(trial, acc) for every trial in [0, trials), partitioned into
// contiguous chunks over worker threads. Partial accumulators merge in chunk
// order, so the result is independent of scheduling. threads = 0 uses the
// hardware count.
template <typename Acc, typename Body, typename Merge>
Acc reduce_over_trials(long long trials, Acc init, Body&& body, Merge&& merge,
                       unsigned threads = 0) {
    if (threads == 0) threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    if (trials < static_cast<long long>(threads) * 4) threads = 1;

    if (threads == 1) {
        Acc acc = init;
        for (long long t = 0; t < trials; ++t) body(t, acc);
        return acc;
    }

    std::vector<Acc> partial(threads, init);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const long long chunk = (trials + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const long long begin = static_cast<long long>(w) * chunk;
        const long long end = std::min(trials, begin + chunk);
        pool.emplace_back([&, w, begin, end] {
            for (long long t = begin; t < end; ++t) body(t, partial[w]);
        });
    }
    for (auto& th : pool) th.join();
    Acc acc = init;
    for (const Acc& p : partial) merge(acc, p);
    return acc;
}

}  // namespace qav
