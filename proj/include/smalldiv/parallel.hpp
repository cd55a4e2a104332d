#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace smalldiv {

/// Worker-thread knob. Results never depend on it: work is split into
/// chunks whose boundaries depend only on the problem size, and chunk
/// partials are merged in chunk order.
struct Threads {
    unsigned count = 1;

    static Threads automatic() {
        const unsigned hw = std::thread::hardware_concurrency();
        return Threads{hw == 0 ? 1u : hw};
    }
};

/// Half-open range [begin, end) of 64-bit indices.
struct IndexRange {
    std::uint64_t begin;
    std::uint64_t end;
};

/// Fixed partition of [begin, end) into chunks of `chunk_size` indices.
inline std::vector<IndexRange> make_chunks(std::uint64_t begin, std::uint64_t end,
                                           std::uint64_t chunk_size) {
    std::vector<IndexRange> chunks;
    if (chunk_size == 0) {
        chunk_size = 1;
    }
    for (std::uint64_t lo = begin; lo < end; lo += chunk_size) {
        chunks.push_back({lo, std::min(end, lo + chunk_size)});
    }
    return chunks;
}

/// Evaluates `body(range)` for every chunk and returns the partials in chunk
/// order. Exceptions from a worker are rethrown on the calling thread.
template <typename Partial, typename Body>
std::vector<Partial> map_chunks(const std::vector<IndexRange>& chunks, Threads threads,
                                Body&& body) {
    std::vector<Partial> partials(chunks.size());
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads.count), chunks.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            partials[i] = body(chunks[i]);
        }
        return partials;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= chunks.size()) {
                return;
            }
            try {
                partials[i] = body(chunks[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned t = 1; t < workers; ++t) {
        pool.emplace_back(run);
    }
    run();
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
    return partials;
}

/// map_chunks followed by an in-order left fold with `merge(acc, partial)`.
template <typename Partial, typename Body, typename Merge>
Partial reduce_chunks(const std::vector<IndexRange>& chunks, Threads threads, Partial init,
                      Body&& body, Merge&& merge) {
    auto partials = map_chunks<Partial>(chunks, threads, std::forward<Body>(body));
    for (auto& p : partials) {
        merge(init, p);
    }
    return init;
}

}  // namespace smalldiv
