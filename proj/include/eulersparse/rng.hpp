#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace eulersparse {

// All randomized routines in the library draw through these helpers so runs
// are reproducible bit-for-bit from a seed. std::uniform_int_distribution et
// al. are implementation-defined, which would tie results to a particular
// standard library, so we roll the small amount of machinery we need.

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derive an independent stream seed from a master seed and a stream index.
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
    uint64_t s = master ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL);
    splitmix64(s);
    return splitmix64(s);
}

using Rng = std::mt19937_64;

// Uniform in [0, bound). Multiply-shift; the bias is < 2^-64 per draw.
inline uint64_t rand_below(Rng& rng, uint64_t bound) {
    if (bound <= 1) return 0;
    return static_cast<uint64_t>((static_cast<__uint128_t>(rng()) * bound) >> 64);
}

// Uniform in [lo, hi] inclusive.
inline int64_t rand_range(Rng& rng, int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(rand_below(rng, static_cast<uint64_t>(hi - lo + 1)));
}

inline bool rand_bit(Rng& rng) { return (rng() >> 63) != 0; }

// Uniform double in (0, 1].
inline double rand_unit(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

// Standard normal via Box-Muller (one value per call; we do not bother
// caching the second one).
inline double rand_normal(Rng& rng) {
    double u1 = rand_unit(rng);
    double u2 = rand_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace eulersparse
