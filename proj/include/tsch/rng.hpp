#pragma once

#include <cstdint>

namespace tsch::rng {

// SplitMix64 finalizer: a full-avalanche 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Keyed counter generator. The value at (seed, stream, counter, draw) is
// independent of every other key, so outcomes do not depend on the order in
// which the simulation or trainer happens to consume them.
inline std::uint64_t draw_u64(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter, std::uint64_t draw) {
    return mix64(seed ^ mix64(stream ^ mix64(counter ^ mix64(draw))));
}

// Uniform in [0,1), 53 random bits.
inline double draw_unit(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t counter, std::uint64_t draw) {
    return static_cast<double>(draw_u64(seed, stream, counter, draw) >> 11) * 0x1.0p-53;
}

// Bounded draw via 128-bit multiply reduction.
inline std::uint64_t draw_below(std::uint64_t seed, std::uint64_t stream,
                                std::uint64_t counter, std::uint64_t draw,
                                std::uint64_t bound) {
    const auto wide = static_cast<unsigned __int128>(draw_u64(seed, stream, counter, draw));
    return static_cast<std::uint64_t>((wide * bound) >> 64);
}

// Stream namespaces keep unrelated consumers decorrelated under one seed.
inline constexpr std::uint64_t kStreamLink    = 0x01ULL << 56; // + edge key
inline constexpr std::uint64_t kStreamPhase   = 0x02ULL << 56; // + flow index
inline constexpr std::uint64_t kStreamShuffle = 0x03ULL << 56; // + epoch
inline constexpr std::uint64_t kStreamInit    = 0x04ULL << 56;

} // namespace tsch::rng
