#pragma once

// Portable deterministic randomness. The standard distributions are
// implementation-defined, so anything that must reproduce byte-for-byte
// across toolchains draws through these helpers instead.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace emocorpus {

/// Name recorded alongside seeds in emitted artifacts.
inline constexpr std::string_view kRngName = "mt19937_64";

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// FNV-1a, 64 bit. Stable string hash for deriving per-item seeds.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
    return splitmix64(base ^ splitmix64(salt));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view salt) {
    return derive_seed(base, fnv1a64(salt));
}

/// Uniform integer in [0, n) by rejection; n > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = Rng::max() - (Rng::max() % n + 1) % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x > limit);
    return x % n;
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Standard normal via Box-Muller (one value per call).
inline double standard_normal(Rng& rng) {
    double u1 = uniform_unit(rng);
    while (u1 <= 0.0) u1 = uniform_unit(rng);
    const double u2 = uniform_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace emocorpus
