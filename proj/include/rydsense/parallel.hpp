#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace rydsense {

// Runs f(i) for i in [0, count). Each call must only write its own output slot,
// so results do not depend on the thread count. If any call throws, the
// exception from the lowest index is rethrown after all work finishes.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
    if (count == 0) return;
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::size_t>(count, 1024))));
    std::size_t fail_index = std::numeric_limits<std::size_t>::max();
    std::exception_ptr fail;
    std::mutex m;
    auto run = [&](std::size_t i) {
        try {
            f(i);
        } catch (...) {
            std::lock_guard<std::mutex> lk(m);
            if (i < fail_index) {
                fail_index = i;
                fail = std::current_exception();
            }
        }
    };
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) run(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) run(i);
            });
        for (auto& th : pool) th.join();
    }
    if (fail) std::rethrow_exception(fail);
}

}  // namespace rydsense
