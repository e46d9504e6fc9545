#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "qstrat/rng.hpp"

namespace qstrat {

inline unsigned default_thread_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(rng, r) for r in [0, replicates) with rng = Rng(seed, r) and
// stores the results by index. Output is identical for any thread count.
template <class T, class Fn>
std::vector<T> run_replicates(std::size_t replicates, std::uint64_t seed, unsigned threads, Fn&& fn) {
    std::vector<T> out(replicates);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(replicates, 1))));
    if (threads == 1) {
        for (std::size_t r = 0; r < replicates; ++r) {
            Rng rng(seed, r);
            out[r] = fn(rng, r);
        }
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= replicates) return;
            try {
                Rng rng(seed, r);
                out[r] = fn(rng, r);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = replicates;
                return;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace qstrat
