#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace tarsim {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent sub-seed from a master seed, a stream tag and an
/// ordinal (e.g. a round number). All randomness in a run flows from one
/// master seed through named streams so components never share draws.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t n = 0) {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(splitmix64(master ^ h) + n);
}

/// Uniform double in [0,1) from the top 53 bits; avoids the
/// implementation-defined behaviour of std::generate_canonical.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection on the high bits.
inline std::uint64_t bounded_uint(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = gen();
        if (r >= threshold) return r % bound;
    }
}

/// Knuth's product-of-uniforms Poisson sampler; fine for the small means
/// used by the corpus generator.
inline int poisson(std::mt19937_64& gen, double mean) {
    const double limit = std::exp(-mean);
    double product = uniform01(gen);
    int count = 0;
    while (product > limit) {
        ++count;
        product *= uniform01(gen);
    }
    return count;
}

/// Uniform sample of `n` items without replacement via a partial
/// Fisher-Yates shuffle. Output order is the draw order.
template <typename T>
std::vector<T> sample_without_replacement(std::span<const T> pool, std::size_t n,
                                          std::uint64_t seed) {
    std::vector<T> items(pool.begin(), pool.end());
    if (n > items.size()) n = items.size();
    std::mt19937_64 gen(seed);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = i + static_cast<std::size_t>(
                                bounded_uint(gen, items.size() - i));
        std::swap(items[i], items[j]);
    }
    items.resize(n);
    return items;
}

} // namespace tarsim
