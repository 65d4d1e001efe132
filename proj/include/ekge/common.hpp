// Shared utilities: error types, deterministic RNG helpers, hashing,
// and a deterministic parallel-map helper.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace ekge {

// Raised for malformed or inconsistent input data (bad TSV lines,
// contradictory facts, vocabulary mismatches).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an optimization run produces non-finite values.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

// Uniform double in [0,1). Bit-reproducible across platforms, unlike
// std::uniform_real_distribution.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0,n). Rejection sampling, no modulo bias.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % n;
}

// Derives an independent RNG stream from a master seed. Streams with
// distinct tags never overlap in practice.
inline Rng seeded_rng(std::uint64_t seed, std::uint64_t stream_tag = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_tag), static_cast<std::uint32_t>(stream_tag >> 32)};
    Rng rng(0);
    rng.seed(seq);
    return rng;
}

// FNV-1a, used for vocabulary and file fingerprints.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Runs fn(i) for i in [0,n). Each index writes only its own outputs, so
// results are identical for any thread count. threads==0 means one per core.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([=, &fn] {
            for (std::size_t i = w; i < n; i += threads) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace ekge
