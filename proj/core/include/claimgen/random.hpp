#pragma once

// Deterministic random helpers.
//
// Standard distribution objects (std::uniform_real_distribution and friends)
// are implementation-defined and produce different streams across standard
// libraries. Everything here is pinned to the raw mt19937_64 output so that
// artifacts are byte-identical on any platform.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace claimgen::rng {

using Engine = std::mt19937_64;

// Uniform double in [0, 1): the top 53 bits of one engine draw.
inline double unit_real(Engine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, bound) via rejection sampling (Lemire's method).
inline std::uint64_t bounded(Engine& rng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("bounded: bound must be positive");
    std::uint64_t threshold = (-bound) % bound;
    for (;;) {
        std::uint64_t r = rng();
        // Multiply-shift maps r into [0, bound) with bias only when the
        // low half falls under the threshold; reject those draws.
        __uint128_t m = static_cast<__uint128_t>(r) * bound;
        if (static_cast<std::uint64_t>(m) >= threshold)
            return static_cast<std::uint64_t>(m >> 64);
    }
}

// One-shot mixer for deriving independent seeds from (seed, index).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// FNV-1a over bytes, used to fold strings into seeds.
inline std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
inline std::vector<std::size_t> sample_without_replacement(Engine& rng, std::size_t n,
                                                           std::size_t k) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k exceeds n");
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(bounded(rng, n - i));
        std::swap(pool[i], pool[j]);
        out.push_back(pool[i]);
    }
    return out;
}

} // namespace claimgen::rng
