#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sqrs {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a master seed and a path of counters.
/// Each level is folded as mix(seed ^ counter), so streams for distinct paths differ.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64(master);
    for (std::uint64_t c : path) s = splitmix64(s ^ splitmix64(c + 0x632BE59BD9B4E019ULL));
    return s;
}

inline Rng make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    return Rng(derive_seed(master, path));
}

/// Uniform draw in [0, 1).
inline double uniform01(Rng &rng) { return std::generate_canonical<double, 53>(rng); }

inline bool bernoulli(Rng &rng, double p) { return uniform01(rng) < p; }

inline int uniform_int(Rng &rng, int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

}  // namespace sqrs
