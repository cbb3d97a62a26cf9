#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace favlab {

inline unsigned default_threads() {
    if (const char* env = std::getenv("FAVLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(chunk_index) for every chunk_index in [0, chunk_count). Chunk
// boundaries are fixed by the caller, so results stored per chunk and reduced
// in index order are identical for every thread count.
inline void run_chunks(std::size_t chunk_count, unsigned threads,
                       const std::function<void(std::size_t)>& fn) {
    if (chunk_count == 0) return;
    if (threads <= 1 || chunk_count == 1) {
        for (std::size_t i = 0; i < chunk_count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= chunk_count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    const std::size_t n_workers =
        std::min<std::size_t>(threads, chunk_count);
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

template <class T, class Fn>
std::vector<T> map_chunks(std::size_t chunk_count, unsigned threads, Fn&& fn) {
    std::vector<T> out(chunk_count);
    run_chunks(chunk_count, threads,
               [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

}  // namespace favlab
