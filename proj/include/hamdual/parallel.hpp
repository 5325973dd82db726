#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hamdual {

/// Splits [0, count) into `workers` contiguous chunks, runs `body(begin, end,
/// chunk)` for each on its own thread and returns the per-chunk results in
/// chunk order. The first exception thrown by any chunk is rethrown.
template <class Result, class Body>
std::vector<Result> parallel_chunks(std::size_t count, unsigned workers, Body body) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    std::vector<Result> results(workers);
    std::vector<std::exception_ptr> errors(workers);
    auto run = [&](unsigned w) {
        const std::size_t begin = count * w / workers;
        const std::size_t end = count * (w + 1) / workers;
        try {
            results[w] = body(begin, end, w);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run, w);
        for (auto& t : threads) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

}  // namespace hamdual
