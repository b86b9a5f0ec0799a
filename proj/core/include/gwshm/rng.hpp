#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace gwshm {

// std::mt19937_64 has a fully specified output sequence, so it is the engine
// everywhere. The standard *distributions* are implementation-defined, which
// would break bit-reproducibility across toolchains; the transforms below are
// spelled out instead.

// SplitMix64 mix, used to derive independent sub-seeds from a base seed plus
// stream identifiers (record index, copy index, fold, trial, ...).
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    return mix_seed(mix_seed(base ^ 0xa076'1d64'78bd'642fULL) ^ mix_seed(a) ^ mix_seed(~b));
}

// Uniform double in (0, 1]; never returns 0 so log() below is safe.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

// Unbiased integer in [0, bound) by rejection.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) return r % bound;
    }
}

// Standard normal deviates via Box-Muller, generated pairwise.
inline std::vector<double> gaussian_sequence(std::size_t n, std::mt19937_64& rng) {
    std::vector<double> out(n);
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (std::size_t i = 0; i < n; i += 2) {
        const double u1 = uniform_unit(rng);
        const double u2 = uniform_unit(rng);
        const double r = std::sqrt(-2.0 * std::log(u1));
        out[i] = r * std::cos(two_pi * u2);
        if (i + 1 < n) out[i + 1] = r * std::sin(two_pi * u2);
    }
    return out;
}

// Fisher-Yates with the unbiased draw above.
template <typename T>
void deterministic_shuffle(std::vector<T>& values, std::mt19937_64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(values[i - 1], values[j]);
    }
}

}  // namespace gwshm
