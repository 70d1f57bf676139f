#pragma once

#include <cstdint>

namespace relay::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based generator: every value is a pure function of
// (seed, stream, index), so sample sets are reproducible and shardable.
inline std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t index) {
    std::uint64_t h = splitmix64(seed ^ 0x8f1bbcdcbfa53e0bULL);
    h = splitmix64(h ^ (stream * 0xd1342543de82ef95ULL));
    return splitmix64(h ^ (index * 0x2545f4914f6cdd1dULL));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t index) {
    return static_cast<double>(counter_bits(seed, stream, index) >> 11) *
           0x1.0p-53;
}

// Derives a child seed, used to give restarts/streams independent sample sets.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
    return splitmix64(seed ^ splitmix64(salt));
}

}  // namespace relay::rng
