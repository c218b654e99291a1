#pragma once

#include <cstdint>
#include <random>

namespace seclend {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed for the idx-th substream of a base seed. Two mixing rounds keep
/// nearby (seed, idx) pairs uncorrelated.
inline std::uint64_t substream_seed(std::uint64_t base_seed, std::uint64_t idx) {
    std::uint64_t s = base_seed ^ (0xD1B54A32D192ED03ULL * (idx + 1));
    splitmix64_next(s);
    return splitmix64_next(s);
}

inline std::mt19937_64 make_substream(std::uint64_t base_seed, std::uint64_t idx) {
    return std::mt19937_64(substream_seed(base_seed, idx));
}

/// Paths per deterministic simulation block. Fixed: the partition layout is
/// part of the output contract and must not depend on worker count.
inline constexpr std::size_t kPathsPerBlock = 8192;

struct SeedDescriptor {
    std::uint64_t base_seed = 0;
    std::size_t block_size = kPathsPerBlock;
    std::size_t block_count = 0;
};

} // namespace seclend
