#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace spa {

/// Engine behind every random draw. Its output sequence is fixed by the
/// standard, and all distributions used with it come from Boost.Random,
/// so streams are reproducible across platforms.
using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of the substream `index` under `seed`. Substreams are keyed, not
/// sequential, so any subset can be generated in any order.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// FNV-1a, for keying substreams by name.
constexpr std::uint64_t hash_label(std::string_view label) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline Engine substream(std::uint64_t seed, std::uint64_t index) {
    return Engine(derive_seed(seed, index));
}

}  // namespace spa
