#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace bnw {

// All randomness flows through std::mt19937_64, whose output sequence is
// pinned by the standard, so runs reproduce across platforms. The standard
// distributions are implementation-defined and must not be used; draw via
// the helpers below instead.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Stable per-task seed: a global seed fans out to labeled subtask streams,
// so adding or reordering parallel work never changes a task's draws.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label,
                                 std::uint64_t index = 0) {
    std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a over the label bytes
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return splitmix64(h ^ splitmix64(base ^ 0x5851f42d4c957f2dull) ^
                      splitmix64(index + 0x14057b7ef767814full));
}

// Unbiased draw from [0, n) by rejection.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t zone = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= zone);
    return static_cast<std::size_t>(x % bound);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace bnw
