#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace entroposep {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Stream tags keep independent sampling contexts (training pools, validation
/// pools, samplers) on disjoint pseudo-random streams under one user seed.
enum class SeedStream : std::uint64_t {
    sphere = 1,
    product_sphere = 2,
    ensemble = 3,
    smeared = 4,
    pool_train = 5,
    pool_validate = 6,
    qmc_scramble = 7,
};

/// Deterministic engine for (seed, stream, shard). Each shard of a sampling
/// plan owns one; results are merged in shard order, so the outcome does not
/// depend on how shards are assigned to threads.
inline std::mt19937_64 make_engine(std::uint64_t seed, SeedStream stream, std::uint64_t shard) {
    std::uint64_t s = seed;
    s ^= 0x6a09e667f3bcc909ULL + static_cast<std::uint64_t>(stream);
    detail::splitmix64(s);
    s += shard * 0x9e3779b97f4a7c15ULL;
    std::uint64_t mixed = detail::splitmix64(s);
    return std::mt19937_64(mixed);
}

inline constexpr std::size_t kShardSize = 16384;

struct ShardPlan {
    std::size_t total = 0;

    std::size_t shard_count() const { return (total + kShardSize - 1) / kShardSize; }
    std::size_t shard_begin(std::size_t shard) const { return shard * kShardSize; }
    std::size_t shard_size(std::size_t shard) const {
        std::size_t begin = shard_begin(shard);
        return begin >= total ? 0 : std::min(kShardSize, total - begin);
    }
};

inline int resolve_threads(int threads) {
    if (threads > 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Run `work(shard)` for every shard index, spreading shards over `threads`
/// workers. The shard plan is fixed by the caller, so any thread count
/// produces the same per-shard results.
inline void run_sharded(std::size_t shard_count, int threads, const std::function<void(std::size_t)>& work) {
    threads = resolve_threads(threads);
    if (shard_count == 0) return;
    if (threads == 1 || shard_count == 1) {
        for (std::size_t s = 0; s < shard_count; ++s) work(s);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto runner = [&] {
        while (true) {
            std::size_t s = next.fetch_add(1);
            if (s >= shard_count) return;
            try {
                work(s);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(threads), shard_count);
    pool.reserve(n_workers);
    for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(runner);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace entroposep
